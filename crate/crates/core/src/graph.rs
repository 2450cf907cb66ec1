//! Undirected weighted graphs in compressed adjacency form, METIS/Chaco I/O,
//! partitions, and block contraction.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{ParseError, Result};

/// Undirected graph with positive integer edge weights.
///
/// Every undirected edge is stored twice, once per endpoint. Each adjacency
/// list is sorted by neighbor id, which makes structural equality of two
/// graphs the same as `==` on this type.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    xadj: Vec<usize>,
    adjncy: Vec<u32>,
    adjwgt: Vec<u64>,
}

impl Graph {
    /// Builds a graph from undirected edges `(u, v, w)`.
    ///
    /// Each edge must appear once. Self-loops, duplicates, zero weights and
    /// out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize, u64)]) -> Result<Self, ParseError> {
        let mut lists: Vec<Vec<(u32, u64)>> = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            if u >= n || v >= n {
                return Err(ParseError::Line {
                    line: 0,
                    msg: format!("edge {u}-{v} out of range for {n} vertices"),
                });
            }
            if u == v {
                return Err(ParseError::Line {
                    line: 0,
                    msg: format!("self-loop at vertex {u}"),
                });
            }
            if w == 0 {
                return Err(ParseError::Weight { u, v, weight: 0 });
            }
            lists[u].push((v as u32, w));
            lists[v].push((u as u32, w));
        }
        let g = Self::from_lists(lists);
        for u in 0..n {
            if g.neighbors_raw(u).windows(2).any(|p| p[0] == p[1]) {
                return Err(ParseError::Line {
                    line: 0,
                    msg: format!("duplicate edge at vertex {u}"),
                });
            }
        }
        Ok(g)
    }

    /// Unit-weight convenience wrapper around [`Graph::from_edges`].
    pub fn from_unweighted_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, ParseError> {
        let weighted: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1)).collect();
        Self::from_edges(n, &weighted)
    }

    /// Assembles a graph from per-vertex lists, sorting each list. The
    /// caller guarantees symmetry and the absence of self-loops.
    pub(crate) fn from_lists(mut lists: Vec<Vec<(u32, u64)>>) -> Self {
        let mut xadj = Vec::with_capacity(lists.len() + 1);
        let total: usize = lists.iter().map(Vec::len).sum();
        let mut adjncy = Vec::with_capacity(total);
        let mut adjwgt = Vec::with_capacity(total);
        xadj.push(0);
        for list in &mut lists {
            list.sort_unstable();
            for &(v, w) in list.iter() {
                adjncy.push(v);
                adjwgt.push(w);
            }
            xadj.push(adjncy.len());
        }
        Graph {
            xadj,
            adjncy,
            adjwgt,
        }
    }

    /// Builds a graph directly from compressed arrays that already satisfy
    /// every invariant (sorted, symmetric, loop-free).
    pub(crate) fn from_csr(xadj: Vec<usize>, adjncy: Vec<u32>, adjwgt: Vec<u64>) -> Self {
        debug_assert_eq!(xadj.last().copied().unwrap_or(0), adjncy.len());
        debug_assert_eq!(adjncy.len(), adjwgt.len());
        Graph {
            xadj,
            adjncy,
            adjwgt,
        }
    }

    pub fn n(&self) -> usize {
        self.xadj.len().saturating_sub(1)
    }

    /// Number of undirected edges.
    pub fn m(&self) -> usize {
        self.adjncy.len() / 2
    }

    pub fn degree(&self, u: usize) -> usize {
        self.xadj[u + 1] - self.xadj[u]
    }

    fn neighbors_raw(&self, u: usize) -> &[u32] {
        &self.adjncy[self.xadj[u]..self.xadj[u + 1]]
    }

    /// Neighbor ids of `u`, ascending.
    pub fn neighbor_ids(&self, u: usize) -> &[u32] {
        self.neighbors_raw(u)
    }

    /// `(neighbor, weight)` pairs of `u`, ascending by neighbor.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        let r = self.xadj[u]..self.xadj[u + 1];
        self.adjncy[r.clone()]
            .iter()
            .zip(&self.adjwgt[r])
            .map(|(&v, &w)| (v as usize, w))
    }

    /// Each undirected edge once, as `(u, v, w)` with `u < v`, in
    /// lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| v > u)
                .map(move |(v, w)| (u, v, w))
        })
    }

    /// Weight of edge `{u, v}`, if present.
    pub fn edge_weight(&self, u: usize, v: usize) -> Option<u64> {
        let r = self.xadj[u]..self.xadj[u + 1];
        self.adjncy[r.clone()]
            .binary_search(&(v as u32))
            .ok()
            .map(|i| self.adjwgt[r.start + i])
    }

    pub fn total_weight(&self) -> u64 {
        self.adjwgt.iter().sum::<u64>() / 2
    }

    pub fn is_unit_weighted(&self) -> bool {
        self.adjwgt.iter().all(|&w| w == 1)
    }

    pub(crate) fn xadj(&self) -> &[usize] {
        &self.xadj
    }

    pub(crate) fn adjncy(&self) -> &[u32] {
        &self.adjncy
    }

    pub(crate) fn adjwgt(&self) -> &[u64] {
        &self.adjwgt
    }
}

/// Assignment of every vertex to one of `k` blocks.
///
/// A task-to-processor mapping is a partition whose blocks are processor ids,
/// see [`Mapping`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub block: Vec<u32>,
    pub k: usize,
}

/// Per-vertex processor id; block `b` of the partition runs on PE `b`.
pub type Mapping = Partition;

impl Partition {
    /// Wraps block ids, checking that each is below `k`.
    pub fn new(block: Vec<u32>, k: usize) -> Result<Self> {
        if let Some((v, &b)) = block.iter().enumerate().find(|(_, &b)| b as usize >= k) {
            return Err(crate::Error::Invalid(format!(
                "vertex {v} assigned to block {b}, but k = {k}"
            )));
        }
        Ok(Partition { block, k })
    }

    pub fn len(&self) -> usize {
        self.block.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block.is_empty()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &b in &self.block {
            sizes[b as usize] += 1;
        }
        sizes
    }

    /// Block sizes in ascending order; two partitions with equal multisets
    /// have the same balance.
    pub fn size_multiset(&self) -> Vec<usize> {
        let mut sizes = self.block_sizes();
        sizes.sort_unstable();
        sizes
    }

    /// Vertices of each block, ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &b) in self.block.iter().enumerate() {
            out[b as usize].push(v);
        }
        out
    }
}

/// Parses a METIS/Chaco graph.
///
/// Header: `n m [fmt [ncon]]`. `fmt` is up to three binary digits: vertex
/// sizes, vertex weights, edge weights. Vertex sizes and weights are read and
/// discarded. Lines beginning with `%` are comments. Missing trailing
/// adjacency lines are treated as isolated vertices.
pub fn parse_metis(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim_start().starts_with('%'));

    let (_, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| ParseError::Header("empty input".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if !(2..=4).contains(&fields.len()) {
        return Err(ParseError::Header(format!("expected `n m [fmt [ncon]]`, got `{header}`")));
    }
    let parse_usize = |s: &str, what: &str| {
        s.parse::<usize>()
            .map_err(|_| ParseError::Header(format!("bad {what} `{s}`")))
    };
    let n = parse_usize(fields[0], "vertex count")?;
    let m = parse_usize(fields[1], "edge count")?;
    let fmt = fields.get(2).copied().unwrap_or("0");
    if fmt.len() > 3 || !fmt.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(ParseError::Header(format!("bad fmt `{fmt}`")));
    }
    let fmt = format!("{fmt:0>3}");
    let has_vsize = fmt.as_bytes()[0] == b'1';
    let has_vwgt = fmt.as_bytes()[1] == b'1';
    let has_ewgt = fmt.as_bytes()[2] == b'1';
    let ncon = match fields.get(3) {
        Some(s) => parse_usize(s, "ncon")?,
        None => usize::from(has_vwgt),
    };
    let skip = usize::from(has_vsize) + if has_vwgt { ncon } else { 0 };

    let mut lists: Vec<Vec<(u32, u64)>> = Vec::with_capacity(n);
    for (lineno, line) in lines {
        if lists.len() == n {
            if line.trim().is_empty() {
                continue;
            }
            return Err(ParseError::VertexCount {
                declared: n,
                found: n + 1,
            });
        }
        let u = lists.len();
        let bad = |msg: String| ParseError::Line {
            line: lineno + 1,
            msg,
        };
        let mut toks = line.split_whitespace().skip(skip);
        let mut list = Vec::new();
        while let Some(tok) = toks.next() {
            let v: usize = tok
                .parse()
                .map_err(|_| bad(format!("bad neighbor id `{tok}`")))?;
            if v == 0 || v > n {
                return Err(bad(format!("neighbor id {v} out of range 1..={n}")));
            }
            let w: i64 = if has_ewgt {
                let t = toks
                    .next()
                    .ok_or_else(|| bad(format!("missing weight after neighbor {v}")))?;
                t.parse().map_err(|_| bad(format!("bad edge weight `{t}`")))?
            } else {
                1
            };
            if w <= 0 {
                return Err(ParseError::Weight {
                    u,
                    v: v - 1,
                    weight: w,
                });
            }
            if v - 1 == u {
                return Err(bad(format!("self-loop at vertex {v}")));
            }
            list.push(((v - 1) as u32, w as u64));
        }
        lists.push(list);
    }
    lists.resize_with(n, Vec::new);

    let g = Graph::from_lists(lists);
    for u in 0..n {
        let ids = g.neighbors_raw(u);
        if let Some(p) = ids.windows(2).find(|p| p[0] == p[1]) {
            return Err(ParseError::Line {
                line: 0,
                msg: format!("vertex {} lists neighbor {} twice", u + 1, p[0] + 1),
            });
        }
    }
    for u in 0..n {
        for (v, w) in g.neighbors(u) {
            if g.edge_weight(v, u) != Some(w) {
                return Err(ParseError::Asymmetric { u, v });
            }
        }
    }
    if g.adjncy.len() != 2 * m {
        return Err(ParseError::EdgeCount {
            declared: m,
            found: g.adjncy.len() / 2,
        });
    }
    Ok(g)
}

/// Serializes in METIS format; edge weights are written only when some
/// weight differs from 1.
pub fn write_metis(g: &Graph) -> String {
    let weighted = !g.is_unit_weighted();
    let mut out = String::new();
    if weighted {
        writeln!(out, "{} {} 001", g.n(), g.m()).unwrap();
    } else {
        writeln!(out, "{} {}", g.n(), g.m()).unwrap();
    }
    for u in 0..g.n() {
        let mut first = true;
        for (v, w) in g.neighbors(u) {
            if !first {
                out.push(' ');
            }
            first = false;
            if weighted {
                write!(out, "{} {}", v + 1, w).unwrap();
            } else {
                write!(out, "{}", v + 1).unwrap();
            }
        }
        out.push('\n');
    }
    out
}

/// Parses a partition or mapping file: one block id per line, line `i`
/// holding the block of vertex `i`. When `k` is `None` it is inferred as
/// the largest id plus one.
pub fn parse_partition(text: &str, n: usize, k: Option<usize>) -> Result<Partition> {
    let mut block = Vec::with_capacity(n);
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let b: u32 = t.parse().map_err(|_| ParseError::Line {
            line: i + 1,
            msg: format!("bad block id `{t}`"),
        })?;
        block.push(b);
    }
    if block.len() != n {
        return Err(crate::Error::SizeMismatch(format!(
            "partition has {} entries, graph has {n} vertices",
            block.len()
        )));
    }
    let k = k.unwrap_or_else(|| block.iter().map(|&b| b as usize + 1).max().unwrap_or(0));
    Partition::new(block, k)
}

pub fn write_partition(p: &Partition) -> String {
    let mut out = String::with_capacity(p.len() * 4);
    for &b in &p.block {
        writeln!(out, "{b}").unwrap();
    }
    out
}

/// Contracts every block of `p` into a single vertex. Edge weights between
/// blocks are the summed weights of the crossing edges; intra-block edges
/// vanish.
pub fn contract_blocks(g: &Graph, p: &Partition) -> Graph {
    let mut lists: Vec<Vec<(u32, u64)>> = vec![Vec::new(); p.k];
    // slot[b] = position of b in the current block's list, or usize::MAX
    let mut slot = vec![usize::MAX; p.k];
    let members = p.members();
    for (bu, verts) in members.iter().enumerate() {
        let mut list: Vec<(u32, u64)> = Vec::new();
        for &u in verts {
            for (v, w) in g.neighbors(u) {
                let bv = p.block[v] as usize;
                if bv == bu {
                    continue;
                }
                match slot[bv] {
                    usize::MAX => {
                        slot[bv] = list.len();
                        list.push((bv as u32, w));
                    }
                    i => list[i].1 += w,
                }
            }
        }
        for &(b, _) in &list {
            slot[b as usize] = usize::MAX;
        }
        lists[bu] = list;
    }
    Graph::from_lists(lists)
}
