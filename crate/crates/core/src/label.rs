//! Unique application-vertex labels built from processor labels.
//!
//! Each vertex label is the concatenation of its PE's partial-cube label
//! (processor part) and a within-block index (extension part). Labels are
//! single 64-bit words; bit 0 is the least significant digit, which is the
//! first digit removed when a hierarchy is contracted. Unpermuted, the
//! extension occupies the low `dim_ga - dim_gp` bits and the processor part
//! sits above it.

use std::collections::HashMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Mapping, Partition};
use crate::pcube::PcubeLabeling;

pub const MAX_LABEL_BITS: usize = 64;

/// Mask with the low `width` bits set.
#[inline]
pub fn low_mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// Label width needed to make every vertex label unique: the processor
/// width plus enough bits to number the largest block.
pub fn dim_ga(dim_gp: usize, block_sizes: &[usize]) -> Result<usize> {
    let ext = block_sizes.iter().map(|&s| ceil_log2(s)).max().unwrap_or(0);
    let width = dim_gp + ext;
    if width > MAX_LABEL_BITS {
        return Err(Error::Capacity {
            what: "application labels",
            needed: width,
            limit: MAX_LABEL_BITS,
        });
    }
    Ok(width)
}

/// Moves bit `j` of `label` to position `perm[j]`.
#[inline]
pub fn permute_bits(label: u64, perm: &[u8]) -> u64 {
    let mut out = 0;
    for (j, &p) in perm.iter().enumerate() {
        out |= ((label >> j) & 1) << p;
    }
    out
}

pub fn invert_perm(perm: &[u8]) -> Vec<u8> {
    let mut inv = vec![0u8; perm.len()];
    for (j, &p) in perm.iter().enumerate() {
        inv[p as usize] = j as u8;
    }
    inv
}

fn is_bijection(perm: &[u8]) -> bool {
    let mut seen = vec![false; perm.len()];
    perm.iter().all(|&p| {
        let p = p as usize;
        p < seen.len() && !std::mem::replace(&mut seen[p], true)
    })
}

/// A label together with its active width, for display.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitLabel {
    pub bits: u64,
    pub width: u8,
}

impl fmt::Display for BitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.width == 0 {
            return Ok(());
        }
        write!(f, "{:0w$b}", self.bits, w = self.width as usize)
    }
}

/// Which label positions hold processor bits and which hold extension bits,
/// plus the position permutation currently applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelLayout {
    pub dim_gp: usize,
    pub dim_ga: usize,
    pub proc_mask: u64,
    pub ext_mask: u64,
    /// `perm[j]` is the current position of original bit `j`.
    pub perm: Vec<u8>,
}

impl LabelLayout {
    pub fn identity(dim_gp: usize, dim_ga: usize) -> Self {
        assert!(dim_gp <= dim_ga && dim_ga <= MAX_LABEL_BITS);
        let ext = dim_ga - dim_gp;
        LabelLayout {
            dim_gp,
            dim_ga,
            ext_mask: low_mask(ext),
            proc_mask: low_mask(dim_ga) & !low_mask(ext),
            perm: (0..dim_ga as u8).collect(),
        }
    }

    pub fn ext_width(&self) -> usize {
        self.dim_ga - self.dim_gp
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(j, &p)| j == p as usize)
    }

    /// Layout after additionally moving current position `j` to `perm[j]`.
    pub fn permuted(&self, perm: &[u8]) -> Self {
        LabelLayout {
            dim_gp: self.dim_gp,
            dim_ga: self.dim_ga,
            proc_mask: permute_bits(self.proc_mask, perm),
            ext_mask: permute_bits(self.ext_mask, perm),
            perm: self.perm.iter().map(|&p| perm[p as usize]).collect(),
        }
    }

    /// Processor and extension masks as seen by labels with their lowest
    /// `level - 1` digits cut off.
    pub fn level_masks(&self, level: usize) -> LevelMasks {
        let shift = level - 1;
        LevelMasks {
            proc: self.proc_mask >> shift,
            ext: self.ext_mask >> shift,
        }
    }
}

/// Processor/extension masks for labels of one hierarchy level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelMasks {
    pub proc: u64,
    pub ext: u64,
}

impl LevelMasks {
    /// Contribution of one unit-weight edge to Coco⁺.
    #[inline]
    pub fn cost(&self, a: u64, b: u64) -> i64 {
        let x = a ^ b;
        (x & self.proc).count_ones() as i64 - (x & self.ext).count_ones() as i64
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExtendOptions {
    /// Accept mappings that leave some PEs without vertices.
    pub allow_empty_pes: bool,
}

/// Bijective labeling of the application vertices.
#[derive(Debug, Clone)]
pub struct LabelState {
    layout: LabelLayout,
    labels: Vec<u64>,
    index: HashMap<u64, u32>,
}

impl PartialEq for LabelState {
    fn eq(&self, other: &Self) -> bool {
        self.layout == other.layout && self.labels == other.labels
    }
}

impl Eq for LabelState {}

impl LabelState {
    /// Checks uniqueness and width, then builds the label index.
    pub fn from_parts(layout: LabelLayout, labels: Vec<u64>) -> Result<Self> {
        let limit = low_mask(layout.dim_ga);
        let mut index = HashMap::with_capacity(labels.len());
        for (v, &l) in labels.iter().enumerate() {
            if l & !limit != 0 {
                return Err(Error::Integrity(format!(
                    "label {l:#x} of vertex {v} exceeds width {}",
                    layout.dim_ga
                )));
            }
            if let Some(u) = index.insert(l, v as u32) {
                return Err(Error::Integrity(format!(
                    "vertices {u} and {v} share label {l:#x}"
                )));
            }
        }
        Ok(LabelState {
            layout,
            labels,
            index,
        })
    }

    /// Labels every application vertex with its PE's label followed by a
    /// within-block index.
    ///
    /// Block members are numbered in a random order, and one random
    /// permutation of the extension positions is applied to all vertices
    /// alike, so labels stay unique.
    pub fn extend<R: Rng + ?Sized>(
        ga: &Graph,
        mapping: &Mapping,
        pl: &PcubeLabeling,
        rng: &mut R,
        opts: ExtendOptions,
    ) -> Result<Self> {
        if mapping.len() != ga.n() {
            return Err(Error::SizeMismatch(format!(
                "mapping has {} entries, graph has {} vertices",
                mapping.len(),
                ga.n()
            )));
        }
        if mapping.k > pl.n() || mapping.block.iter().any(|&b| b as usize >= pl.n()) {
            return Err(Error::SizeMismatch(format!(
                "mapping refers to PEs beyond the {} of the processor graph",
                pl.n()
            )));
        }
        let mapping = Partition {
            block: mapping.block.clone(),
            k: pl.n(),
        };
        let mut members = mapping.members();
        let empty = members.iter().filter(|m| m.is_empty()).count();
        if empty > 0 {
            if !opts.allow_empty_pes {
                return Err(Error::Invalid(format!(
                    "{empty} PEs receive no vertices"
                )));
            }
            log::warn!("{empty} of {} PEs receive no vertices", pl.n());
        }
        let sizes: Vec<usize> = members.iter().map(Vec::len).collect();
        let width = dim_ga(pl.dim, &sizes)?;
        let layout = LabelLayout::identity(pl.dim, width);
        let ext = layout.ext_width();

        for m in &mut members {
            m.shuffle(rng);
        }
        let mut ext_perm: Vec<u8> = (0..ext as u8).collect();
        ext_perm.shuffle(rng);

        let mut labels = vec![0u64; ga.n()];
        for (pe, verts) in members.iter().enumerate() {
            let high = if ext >= 64 { 0 } else { pl.labels[pe] << ext };
            for (i, &v) in verts.iter().enumerate() {
                labels[v] = high | permute_bits(i as u64, &ext_perm);
            }
        }
        Self::from_parts(layout, labels)
    }

    pub fn layout(&self) -> &LabelLayout {
        &self.layout
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, v: usize) -> BitLabel {
        BitLabel {
            bits: self.labels[v],
            width: self.layout.dim_ga as u8,
        }
    }

    pub fn vertex_of(&self, label: u64) -> Option<usize> {
        self.index.get(&label).map(|&v| v as usize)
    }

    /// The label set, sorted.
    pub fn label_set(&self) -> Vec<u64> {
        let mut s = self.labels.clone();
        s.sort_unstable();
        s
    }

    pub fn proc_part(&self, v: usize) -> u64 {
        self.labels[v] & self.layout.proc_mask
    }

    pub fn ext_part(&self, v: usize) -> u64 {
        self.labels[v] & self.layout.ext_mask
    }

    /// Applies a position permutation on top of the current one.
    pub fn permuted(&self, perm: &[u8]) -> Result<Self> {
        if perm.len() != self.layout.dim_ga || !is_bijection(perm) {
            return Err(Error::Invalid(format!(
                "not a permutation of {} positions",
                self.layout.dim_ga
            )));
        }
        let labels = self.labels.iter().map(|&l| permute_bits(l, perm)).collect();
        Self::from_parts(self.layout.permuted(perm), labels)
    }

    /// Restores the identity layout.
    pub fn unpermuted(&self) -> Self {
        let inv = invert_perm(&self.layout.perm);
        self.permuted(&inv).expect("inverse of a valid permutation")
    }

    /// The PE of each vertex. The layout must be unpermuted.
    pub fn decode_mapping(&self, pl: &PcubeLabeling) -> Result<Mapping> {
        if !self.layout.is_identity() {
            return Err(Error::Integrity("decode requires an unpermuted layout".into()));
        }
        let ext = self.layout.ext_width();
        let pe_of: HashMap<u64, u32> = pl
            .labels
            .iter()
            .enumerate()
            .map(|(pe, &l)| (l, pe as u32))
            .collect();
        let block = self
            .labels
            .iter()
            .enumerate()
            .map(|(v, &l)| {
                let proc = if ext >= 64 { 0 } else { l >> ext };
                pe_of.get(&proc).copied().ok_or_else(|| {
                    Error::Integrity(format!(
                        "vertex {v}: processor part {proc:#x} matches no PE"
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Partition { block, k: pl.n() })
    }

    /// `vertex,hex_label` lines with a header.
    pub fn dump_csv(&self) -> String {
        let width = self.layout.dim_ga.div_ceil(4).max(1);
        let mut out = String::from("vertex,hex_label\n");
        for (v, l) in self.labels.iter().enumerate() {
            out.push_str(&format!("{v},{l:0width$x}\n"));
        }
        out
    }
}
