//! Multi-hierarchical label swapping.
//!
//! Each round permutes the label positions at random, which induces a
//! recursive bipartition of the label set. Walking up that hierarchy, sibling
//! vertices swap labels when this lowers Coco⁺ on the current level, and then
//! merge. The per-level labels are reassembled into a new fine labeling,
//! which replaces the current one unless it is worse.

mod assemble;
mod level;

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use assemble::{assemble, Hierarchy};
pub use level::{HierarchyLevel, ParentVec};

use crate::error::{Error, Result};
use crate::graph::{Graph, Mapping};
use crate::label::{invert_perm, permute_bits, ExtendOptions, LabelState};
use crate::objective::{coco, div, ObjectiveValue};
use crate::pcube::PcubeLabeling;

/// Paper-scale default for the number of hierarchies.
pub const DEFAULT_HIERARCHIES: usize = 50;

const EXTEND_STREAM: u64 = 0;
const HIERARCHY_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimerConfig {
    pub n_hierarchies: usize,
    pub seed: u64,
    /// Accept mappings that leave PEs empty.
    pub allow_empty_pes: bool,
}

impl Default for TimerConfig {
    fn default() -> Self {
        TimerConfig {
            n_hierarchies: DEFAULT_HIERARCHIES,
            seed: 0,
            allow_empty_pes: false,
        }
    }
}

/// One hierarchy's result. The objective values are those of the candidate
/// labeling, whether or not it was kept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyTrace {
    pub index: usize,
    pub coco: u64,
    pub div: u64,
    pub coco_plus: i64,
    pub swaps: usize,
    pub accepted: bool,
    pub millis: f64,
}

#[derive(Debug, Clone)]
pub struct TimerOutcome {
    pub mapping: Mapping,
    pub labels: LabelState,
    /// Labels right after extension, before any hierarchy.
    pub initial_labels: LabelState,
    pub initial: ObjectiveValue,
    pub last: ObjectiveValue,
    pub trace: Vec<HierarchyTrace>,
}

/// A candidate labeling from one hierarchy.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub labels: LabelState,
    pub swaps: usize,
}

/// Builds one random hierarchy over `ls` and returns the reassembled
/// labeling; the caller decides whether to keep it.
///
/// Widths of 2 or less leave no level to swap on and return `ls` unchanged.
pub fn run_hierarchy<R: Rng + ?Sized>(ga: &Graph, ls: &LabelState, rng: &mut R) -> Result<Candidate> {
    let dim = ls.layout().dim_ga;
    if dim <= 2 {
        return Ok(Candidate {
            labels: ls.clone(),
            swaps: 0,
        });
    }
    let mut perm: Vec<u8> = (0..dim as u8).collect();
    perm.shuffle(rng);
    let layout = ls.layout().permuted(&perm);
    let fine: Vec<u64> = ls.labels().iter().map(|&l| permute_bits(l, &perm)).collect();
    let mut label_set = fine.clone();
    label_set.sort_unstable();

    let mut h = Hierarchy {
        dim,
        level_labels: Vec::with_capacity(dim - 1),
        parents: Vec::with_capacity(dim - 2),
    };
    let mut swaps = 0;
    let mut level = HierarchyLevel::finest(ga, fine);
    for i in 2..dim {
        swaps += level.swap_phase(layout.level_masks(i - 1));
        let (next, parent) = level.contract();
        h.level_labels.push(std::mem::take(&mut level.labels));
        h.parents.push(parent);
        level = next;
    }
    h.level_labels.push(level.labels);

    let assembled = assemble(&h, &label_set)?;
    let inv = invert_perm(&perm);
    let labels = assembled.into_iter().map(|l| permute_bits(l, &inv)).collect();
    Ok(Candidate {
        labels: LabelState::from_parts(ls.layout().clone(), labels)?,
        swaps,
    })
}

/// Improves `mapping` with `cfg.n_hierarchies` rounds of hierarchical label
/// swapping. A round's result is discarded only if its Coco⁺ is strictly
/// larger than the current one.
pub fn run_timer(ga: &Graph, pl: &PcubeLabeling, mapping: &Mapping, cfg: &TimerConfig) -> Result<TimerOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(EXTEND_STREAM);
    let opts = ExtendOptions {
        allow_empty_pes: cfg.allow_empty_pes,
    };
    let initial_labels = LabelState::extend(ga, mapping, pl, &mut rng, opts)?;
    let mut ls = initial_labels.clone();
    let start_mapping = ls.decode_mapping(pl)?;
    let initial = ObjectiveValue::evaluate(ga, &ls, &start_mapping);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(HIERARCHY_STREAM);
    let mut current = initial.coco_plus;
    let mut trace = Vec::with_capacity(cfg.n_hierarchies);
    for index in 0..cfg.n_hierarchies {
        let t0 = Instant::now();
        let cand = run_hierarchy(ga, &ls, &mut rng)?;
        let c = coco(ga, &cand.labels);
        let d = div(ga, &cand.labels);
        let cp = c as i64 - d as i64;
        let accepted = cp <= current;
        if accepted {
            ls = cand.labels;
            current = cp;
        }
        trace.push(HierarchyTrace {
            index,
            coco: c,
            div: d,
            coco_plus: cp,
            swaps: cand.swaps,
            accepted,
            millis: t0.elapsed().as_secs_f64() * 1e3,
        });
    }

    let mapping = ls.decode_mapping(pl)?;
    if mapping.size_multiset() != start_mapping.size_multiset() {
        return Err(Error::Integrity("block sizes changed during optimization".into()));
    }
    let last = ObjectiveValue::evaluate(ga, &ls, &mapping);
    Ok(TimerOutcome {
        mapping,
        labels: ls,
        initial_labels,
        initial,
        last,
        trace,
    })
}
