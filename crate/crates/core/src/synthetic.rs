//! Synthetic application graphs.

use rand::Rng;

use crate::graph::Graph;

/// Random geometric graph: `n` points uniform in the unit square, joined
/// when closer than the radius that gives an expected average degree of
/// `avg_degree` (boundary effects ignored). Edges have unit weight.
pub fn random_geometric<R: Rng + ?Sized>(n: usize, avg_degree: f64, rng: &mut R) -> Graph {
    if n < 2 {
        return Graph::from_unweighted_edges(n, &[]).unwrap();
    }
    let r = (avg_degree / (std::f64::consts::PI * (n - 1) as f64)).sqrt().min(1.0);
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();

    // bucket grid with cell side >= r
    let cells = ((1.0 / r).floor() as usize).clamp(1, 4096);
    let cell = |x: f64| ((x * cells as f64) as usize).min(cells - 1);
    let mut bucket: Vec<Vec<u32>> = vec![Vec::new(); cells * cells];
    for (i, &(x, y)) in pts.iter().enumerate() {
        bucket[cell(y) * cells + cell(x)].push(i as u32);
    }

    let r2 = r * r;
    let mut edges = Vec::new();
    for (i, &(x, y)) in pts.iter().enumerate() {
        let (cx, cy) = (cell(x), cell(y));
        for by in cy.saturating_sub(1)..=(cy + 1).min(cells - 1) {
            for bx in cx.saturating_sub(1)..=(cx + 1).min(cells - 1) {
                for &j in &bucket[by * cells + bx] {
                    let j = j as usize;
                    if j <= i {
                        continue;
                    }
                    let (dx, dy) = (pts[j].0 - x, pts[j].1 - y);
                    if dx * dx + dy * dy < r2 {
                        edges.push((i, j));
                    }
                }
            }
        }
    }
    Graph::from_unweighted_edges(n, &edges).expect("generated edges are simple")
}
