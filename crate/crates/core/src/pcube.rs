//! Partial-cube recognition and Hamming-isometric labeling via Djoković
//! θ-classes.
//!
//! A connected bipartite graph is a partial cube when the Djoković relation
//! partitions its edges into classes, one per convex cut. Labeling each
//! vertex by the side it lies on for every cut gives bit strings whose
//! Hamming distance equals the graph distance.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::distance::{bfs_all_pairs, DistanceTable};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest number of θ-classes a processor graph may have.
pub const MAX_PCUBE_DIM: usize = 32;

const UNASSIGNED: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reason {
    NotBipartite,
    OverlappingClasses,
    IsometryViolation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// Two vertices. For `NotBipartite`, the endpoints of an edge at equal
    /// distance from vertex 0; for `IsometryViolation`, a pair whose Hamming
    /// distance differs from the graph distance.
    VertexPair(usize, usize),
    /// A seed edge and an edge of its θ-class that already belongs to an
    /// earlier class.
    EdgePair([usize; 2], [usize; 2]),
}

/// Why a graph is not a partial cube, with a checkable witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotPartialCube {
    pub reason: Reason,
    pub witness: Witness,
}

impl fmt::Display for NotPartialCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} (witness {:?})", self.reason, self.witness)
    }
}

impl std::error::Error for NotPartialCube {}

/// Hamming-isometric labels of a partial cube.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcubeLabeling {
    /// Number of θ-classes, i.e. label width.
    pub dim: usize,
    /// Bit `j` of `labels[u]` is 1 iff `u` lies on the far side of cut `j`.
    pub labels: Vec<u64>,
    /// Edges in lexicographic order, parallel to `class_of_edge`.
    pub edges: Vec<(usize, usize)>,
    pub class_of_edge: Vec<u32>,
}

impl PcubeLabeling {
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Hop distance between two PEs, read off their labels.
    #[inline]
    pub fn distance(&self, u: usize, v: usize) -> u32 {
        (self.labels[u] ^ self.labels[v]).count_ones()
    }
}

/// One θ-class together with the two sides of its cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaClass {
    /// Edges `(a, b)` with `a < b` in lexicographic order.
    pub edges: Vec<(usize, usize)>,
    /// Vertices strictly closer to `x` than to `y`.
    pub near_x: Vec<usize>,
    /// Vertices strictly closer to `y` than to `x`.
    pub near_y: Vec<usize>,
}

fn side_of(dist: &DistanceTable, x: usize, y: usize) -> Vec<bool> {
    // true = closer to x; bipartite graphs admit no ties
    (0..dist.n()).map(|w| dist.get(w, x) < dist.get(w, y)).collect()
}

/// The θ-class of edge `{x, y}`: every edge with one endpoint closer to `x`
/// and the other closer to `y`. The graph must be connected and bipartite.
pub fn theta_class(gp: &Graph, dist: &DistanceTable, x: usize, y: usize) -> ThetaClass {
    let near = side_of(dist, x, y);
    let edges = gp.edges().filter(|&(a, b, _)| near[a] != near[b]).map(|(a, b, _)| (a, b)).collect();
    let (near_x, near_y): (Vec<usize>, Vec<usize>) = (0..gp.n()).partition(|&w| near[w]);
    ThetaClass {
        edges,
        near_x,
        near_y,
    }
}

/// Recognizes a partial cube and labels it.
///
/// Seed edges are taken in lexicographic order; each unclassified seed opens
/// a new class `j`, and vertices on its `x` side get bit `j` = 0. A class
/// that reaches an already classified edge proves the graph is not a partial
/// cube. The finished labeling is checked exhaustively for isometry.
pub fn label_partial_cube(gp: &Graph) -> Result<PcubeLabeling> {
    let n = gp.n();
    let dist = bfs_all_pairs(gp)?;

    if let Some((u, v, _)) = gp.edges().find(|&(u, v, _)| dist.get(0, u) == dist.get(0, v)) {
        return Err(NotPartialCube {
            reason: Reason::NotBipartite,
            witness: Witness::VertexPair(u, v),
        }
        .into());
    }

    let edges: Vec<(usize, usize)> = gp.edges().map(|(u, v, _)| (u, v)).collect();
    let mut class_of_edge = vec![UNASSIGNED; edges.len()];
    let mut labels = vec![0u64; n];
    let mut dim = 0usize;

    for seed in 0..edges.len() {
        if class_of_edge[seed] != UNASSIGNED {
            continue;
        }
        if dim == MAX_PCUBE_DIM {
            return Err(Error::Capacity {
                what: "processor labels",
                needed: dim + 1,
                limit: MAX_PCUBE_DIM,
            });
        }
        let (x, y) = edges[seed];
        let near_x = side_of(&dist, x, y);
        for (i, &(a, b)) in edges.iter().enumerate() {
            if near_x[a] == near_x[b] {
                continue;
            }
            if class_of_edge[i] != UNASSIGNED {
                return Err(NotPartialCube {
                    reason: Reason::OverlappingClasses,
                    witness: Witness::EdgePair([x, y], [a, b]),
                }
                .into());
            }
            class_of_edge[i] = dim as u32;
        }
        for (label, &closer_to_x) in labels.iter_mut().zip(&near_x) {
            if !closer_to_x {
                *label |= 1 << dim;
            }
        }
        dim += 1;
    }

    let lab = PcubeLabeling {
        dim,
        labels,
        edges,
        class_of_edge,
    };
    if let Some((u, v)) = isometry_violation(&dist, &lab) {
        return Err(NotPartialCube {
            reason: Reason::IsometryViolation,
            witness: Witness::VertexPair(u, v),
        }
        .into());
    }
    Ok(lab)
}

fn isometry_violation(dist: &DistanceTable, lab: &PcubeLabeling) -> Option<(usize, usize)> {
    let n = dist.n();
    if lab.labels.len() != n {
        return Some((0, 0));
    }
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .find(|&(u, v)| lab.distance(u, v) != dist.get(u, v))
}

/// Exhaustively checks that Hamming distance equals hop distance for every
/// vertex pair. Disconnected graphs never pass.
pub fn verify_isometry(gp: &Graph, lab: &PcubeLabeling) -> bool {
    match bfs_all_pairs(gp) {
        Ok(dist) => isometry_violation(&dist, lab).is_none(),
        Err(_) => false,
    }
}

/// On-disk form of a labeled processor topology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledTopology {
    pub n: usize,
    pub dim: usize,
    pub edges: Vec<[usize; 2]>,
    /// Hex, most significant digit first; bit 0 is class 0.
    pub labels: Vec<String>,
}

impl LabeledTopology {
    pub fn new(gp: &Graph, lab: &PcubeLabeling) -> Self {
        let width = lab.dim.div_ceil(4).max(1);
        LabeledTopology {
            n: gp.n(),
            dim: lab.dim,
            edges: gp.edges().map(|(u, v, _)| [u, v]).collect(),
            labels: lab.labels.iter().map(|l| format!("{l:0width$x}")).collect(),
        }
    }

    /// Decodes the stored labels; the graph is rebuilt from `edges`.
    pub fn decode(&self) -> Result<(Graph, Vec<u64>)> {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        let g = Graph::from_unweighted_edges(self.n, &edges)?;
        if self.labels.len() != self.n {
            return Err(Error::SizeMismatch(format!(
                "{} labels for {} vertices",
                self.labels.len(),
                self.n
            )));
        }
        let labels = self
            .labels
            .iter()
            .map(|s| {
                u64::from_str_radix(s, 16)
                    .map_err(|_| Error::Invalid(format!("bad hex label `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((g, labels))
    }
}
