//! Processor topology specs and generators.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopologyKind {
    Grid2d,
    Grid3d,
    Torus2d,
    Torus3d,
    Hypercube,
}

/// A processor topology: either generated from a kind and extents, or read
/// from a METIS file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TopologySpec {
    Generated { kind: TopologyKind, dims: Vec<usize> },
    File(String),
}

impl TopologySpec {
    pub fn grid2d(a: usize, b: usize) -> Self {
        Self::Generated {
            kind: TopologyKind::Grid2d,
            dims: vec![a, b],
        }
    }

    pub fn grid3d(a: usize, b: usize, c: usize) -> Self {
        Self::Generated {
            kind: TopologyKind::Grid3d,
            dims: vec![a, b, c],
        }
    }

    pub fn torus2d(a: usize, b: usize) -> Self {
        Self::Generated {
            kind: TopologyKind::Torus2d,
            dims: vec![a, b],
        }
    }

    pub fn torus3d(a: usize, b: usize, c: usize) -> Self {
        Self::Generated {
            kind: TopologyKind::Torus3d,
            dims: vec![a, b, c],
        }
    }

    pub fn hypercube(d: usize) -> Self {
        Self::Generated {
            kind: TopologyKind::Hypercube,
            dims: vec![d],
        }
    }

    fn validate(&self) -> Result<()> {
        let Self::Generated { kind, dims } = self else {
            return Ok(());
        };
        let ok = match kind {
            TopologyKind::Hypercube => dims.len() == 1 && (1..=24).contains(&dims[0]),
            TopologyKind::Grid2d | TopologyKind::Torus2d => {
                dims.len() == 2 && dims.iter().all(|&d| d >= 2)
            }
            TopologyKind::Grid3d | TopologyKind::Torus3d => {
                dims.len() == 3 && dims.iter().all(|&d| d >= 2)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Topology(self.to_string()))
        }
    }

    /// Builds the processor graph. File specs are read from disk.
    ///
    /// Vertices of grids and tori are numbered row-major (last extent varies
    /// fastest); hypercube vertex `i` has binary coordinates `i`. Odd tori are
    /// generated without complaint.
    pub fn generate(&self) -> Result<Graph> {
        self.validate()?;
        match self {
            Self::File(path) => {
                let text = std::fs::read_to_string(path)?;
                Ok(crate::graph::parse_metis(&text)?)
            }
            Self::Generated { kind, dims } => Ok(match kind {
                TopologyKind::Hypercube => hypercube(dims[0]),
                TopologyKind::Grid2d | TopologyKind::Grid3d => lattice(dims, false),
                TopologyKind::Torus2d | TopologyKind::Torus3d => lattice(dims, true),
            }),
        }
    }
}

impl FromStr for TopologySpec {
    type Err = Error;

    /// Parses `grid2d:16x16`, `torus3d:8x8x8`, `hypercube:8`, `file:path`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Topology(s.to_string());
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        if kind == "file" {
            if rest.is_empty() {
                return Err(bad());
            }
            return Ok(Self::File(rest.to_string()));
        }
        let kind = match kind {
            "grid2d" => TopologyKind::Grid2d,
            "grid3d" => TopologyKind::Grid3d,
            "torus2d" => TopologyKind::Torus2d,
            "torus3d" => TopologyKind::Torus3d,
            "hypercube" => TopologyKind::Hypercube,
            _ => return Err(bad()),
        };
        let dims = rest
            .split('x')
            .map(|d| d.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let spec = Self::Generated { kind, dims };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for TopologySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::File(p) => write!(f, "file:{p}"),
            Self::Generated { kind, dims } => {
                let name = match kind {
                    TopologyKind::Grid2d => "grid2d",
                    TopologyKind::Grid3d => "grid3d",
                    TopologyKind::Torus2d => "torus2d",
                    TopologyKind::Torus3d => "torus3d",
                    TopologyKind::Hypercube => "hypercube",
                };
                let dims: Vec<String> = dims.iter().map(usize::to_string).collect();
                write!(f, "{name}:{}", dims.join("x"))
            }
        }
    }
}

fn hypercube(d: usize) -> Graph {
    let n = 1usize << d;
    let mut edges = Vec::with_capacity(n * d / 2);
    for u in 0..n {
        for j in 0..d {
            let v = u ^ (1 << j);
            if u < v {
                edges.push((u, v));
            }
        }
    }
    Graph::from_unweighted_edges(n, &edges).expect("hypercube edges are simple")
}

fn lattice(dims: &[usize], wrap: bool) -> Graph {
    let n: usize = dims.iter().product();
    // stride of axis a in row-major order
    let mut stride = vec![1; dims.len()];
    for a in (0..dims.len().saturating_sub(1)).rev() {
        stride[a] = stride[a + 1] * dims[a + 1];
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for (&ext, &s) in dims.iter().zip(&stride) {
            let c = (u / s) % ext;
            if c + 1 < ext {
                edges.push((u, u + s));
            } else if wrap && ext > 2 {
                // the wrap-around link of an extent-2 ring would duplicate the lattice edge
                edges.push((u - c * s, u));
            }
        }
    }
    Graph::from_unweighted_edges(n, &edges).expect("lattice edges are simple")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(s: &str) -> Graph {
        s.parse::<TopologySpec>().unwrap().generate().unwrap()
    }

    #[test]
    fn small_counts() {
        let g = gen("grid2d:2x2");
        assert_eq!((g.n(), g.m()), (4, 4));
        assert!((0..4).all(|u| g.degree(u) == 2));
        let h = gen("hypercube:3");
        assert_eq!((h.n(), h.m()), (8, 12));
        let t = gen("torus2d:16x16");
        assert_eq!((t.n(), t.m()), (256, 512));
        assert!((0..256).all(|u| t.degree(u) == 4));
        let t3 = gen("torus3d:8x8x8");
        assert_eq!((t3.n(), t3.m()), (512, 3 * 512));
        let g3 = gen("grid3d:8x8x8");
        assert_eq!((g3.n(), g3.m()), (512, 3 * 7 * 64));
    }

    #[test]
    fn degree_bounds() {
        let g = gen("grid2d:16x16");
        for u in 0..256 {
            let (x, y) = (u / 16, u % 16);
            let interior = (1..15).contains(&x) && (1..15).contains(&y);
            if interior {
                assert_eq!(g.degree(u), 4);
            } else {
                assert!((2..=3).contains(&g.degree(u)));
            }
        }
        let h = gen("hypercube:8");
        assert!((0..256).all(|u| h.degree(u) == 8));
    }

    #[test]
    fn row_major_numbering() {
        let g = gen("grid2d:3x4");
        // (0,0)-(0,1) and (0,0)-(1,0)
        assert_eq!(g.neighbor_ids(0), &[1, 4]);
        let t = gen("torus2d:3x4");
        assert_eq!(t.neighbor_ids(0), &[1, 3, 4, 8]);
    }

    #[test]
    fn spec_parsing() {
        assert_eq!("hypercube:8".parse::<TopologySpec>().unwrap(), TopologySpec::hypercube(8));
        assert_eq!(
            "torus3d:8x8x8".parse::<TopologySpec>().unwrap().to_string(),
            "torus3d:8x8x8"
        );
        assert!(matches!(
            "file:a.graph".parse::<TopologySpec>().unwrap(),
            TopologySpec::File(p) if p == "a.graph"
        ));
        for bad in ["grid2d:16", "grid2d:1x4", "hypercube:0", "hypercube:2x2", "ring:4", "torus3d:2x2", "grid2d"] {
            assert!(bad.parse::<TopologySpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn odd_torus_is_generated() {
        let t = gen("torus2d:3x3");
        assert_eq!((t.n(), t.m()), (9, 18));
    }
}
