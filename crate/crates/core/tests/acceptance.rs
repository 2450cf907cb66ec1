//! End-to-end acceptance checks. Runs as a plain binary so that every
//! criterion prints its verdict even when the suite passes.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use cubemap::distance::bfs_all_pairs;
use cubemap::label::LabelLayout;
use cubemap::objective::level_coco_plus;
use cubemap::report::{aggregate, Metrics, RunRecord};
use cubemap::synthetic::random_geometric;
use cubemap::timer::{assemble, run_timer, Hierarchy, HierarchyLevel};
use cubemap::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        match $cond {
            true => {}
            false => return Err(format!($($msg)+)),
        }
    };
}

fn random_graph(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = BTreeMap::new();
    for _ in 0..m {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v {
            edges.insert((u.min(v), u.max(v)), rng.gen_range(1..10u64));
        }
    }
    let edges: Vec<_> = edges.into_iter().map(|((u, v), w)| (u, v, w)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// Random small grid, torus or hypercube with at most 64 PEs.
fn random_topology(rng: &mut ChaCha8Rng) -> TopologySpec {
    match rng.gen_range(0..5) {
        0 => TopologySpec::grid2d(rng.gen_range(2..9), rng.gen_range(2..9)),
        1 => TopologySpec::grid3d(rng.gen_range(2..5), rng.gen_range(2..5), rng.gen_range(2..5)),
        2 => TopologySpec::torus2d(2 * rng.gen_range(1..5), 2 * rng.gen_range(1..5)),
        3 => TopologySpec::torus3d(4, 2 * rng.gen_range(1..3), 2 * rng.gen_range(1..3)),
        _ => TopologySpec::hypercube(rng.gen_range(1..7)),
    }
}

/// Mapping that uses every PE at least once.
fn covering_mapping(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Partition {
    let mut block: Vec<u32> = (0..n).map(|v| if v < k { v as u32 } else { rng.gen_range(0..k as u32) }).collect();
    block.shuffle(rng);
    Partition::new(block, k).unwrap()
}

fn small_instance(rng: &mut ChaCha8Rng) -> (Graph, PcubeLabeling, Graph, Partition) {
    let gp = random_topology(rng).generate().unwrap();
    let pl = label_partial_cube(&gp).unwrap();
    let n = rng.gen_range(pl.n()..=200.max(pl.n()));
    let ga = random_graph(n, rng.gen_range(n..4 * n), rng);
    let mapping = covering_mapping(n, pl.n(), rng);
    (gp, pl, ga, mapping)
}

fn criterion_1() -> Verdict {
    let cases = [
        (TopologySpec::grid2d(16, 16), 30),
        (TopologySpec::grid3d(8, 8, 8), 21),
        (TopologySpec::torus2d(16, 16), 16),
        (TopologySpec::torus3d(8, 8, 8), 12),
        (TopologySpec::hypercube(8), 8),
    ];
    let mut slowest = Duration::ZERO;
    for (spec, dim) in cases {
        let t0 = Instant::now();
        let gp = spec.generate().unwrap();
        let pl = label_partial_cube(&gp).map_err(|e| format!("{spec}: {e}"))?;
        ensure!(pl.dim == dim, "{spec}: dimension {} instead of {dim}", pl.dim);
        ensure!(verify_isometry(&gp, &pl), "{spec}: labels are not isometric");
        let dt = t0.elapsed();
        ensure!(dt < Duration::from_secs(10), "{spec}: took {dt:?}");
        slowest = slowest.max(dt);
    }
    Ok(format!("dims 30/21/16/12/8, isometric, slowest {slowest:.2?}"))
}

fn criterion_2() -> Verdict {
    let t0 = Instant::now();
    let reason = |g: &Graph| match label_partial_cube(g) {
        Err(Error::NotPartialCube(e)) => Some(e.reason),
        _ => None,
    };
    let c5 = Graph::from_unweighted_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
    ensure!(reason(&c5) == Some(Reason::NotBipartite), "C5: {:?}", reason(&c5));
    let k23 = Graph::from_unweighted_edges(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap();
    ensure!(reason(&k23) == Some(Reason::OverlappingClasses), "K23: {:?}", reason(&k23));
    let t33 = TopologySpec::torus2d(3, 3).generate().unwrap();
    let r = reason(&t33);
    ensure!(r.is_some(), "torus 3x3 accepted");
    let dt = t0.elapsed();
    ensure!(dt < Duration::from_secs(1), "took {dt:?}");
    Ok(format!("C5 NotBipartite, K23 OverlappingClasses, torus 3x3 {:?}, {dt:.2?}", r.unwrap()))
}

fn criterion_3() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..100 {
        let (gp, pl, ga, mapping) = small_instance(&mut rng);
        let ls = LabelState::extend(&ga, &mapping, &pl, &mut rng, ExtendOptions::default()).unwrap();
        let d = bfs_all_pairs(&gp).unwrap();
        let oracle: u64 = ga
            .edges()
            .map(|(u, v, w)| w * d.get(mapping.block[u] as usize, mapping.block[v] as usize) as u64)
            .sum();
        let got = coco(&ga, &ls);
        ensure!(got == oracle, "instance {i}: label form {got}, distance form {oracle}");
    }
    Ok("100 instances, exact".into())
}

fn criterion_4() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    while checked < 1000 {
        let (_, pl, ga, mapping) = small_instance(&mut rng);
        let ls = LabelState::extend(&ga, &mapping, &pl, &mut rng, ExtendOptions::default()).unwrap();
        let dim = ls.layout().dim_ga;
        let mut perm: Vec<u8> = (0..dim as u8).collect();
        perm.shuffle(&mut rng);
        let ls = ls.permuted(&perm).unwrap();
        let mut level = HierarchyLevel::finest(&ga, ls.labels().to_vec());
        for i in 1..dim {
            let masks = ls.layout().level_masks(i);
            let pairs = level.sibling_pairs();
            for _ in 0..3.min(pairs.len()) {
                let (u, v) = *pairs.choose(&mut rng).unwrap();
                let before = level_coco_plus(&level.graph, &level.labels, masks);
                let mut swapped = level.labels.clone();
                swapped.swap(u, v);
                let after = level_coco_plus(&level.graph, &swapped, masks);
                let gain = swap_gain(&level.graph, &level.labels, masks, u, v);
                ensure!(gain == after - before, "level {i}: gain {gain}, recomputed {}", after - before);
                checked += 1;
            }
            level.swap_phase(masks);
            level = level.contract().0;
        }
    }
    Ok(format!("{checked} swaps, exact"))
}

fn criterion_5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut improved = 0;
    for i in 0..50 {
        let (_, pl, ga, mapping) = small_instance(&mut rng);
        let cfg = TimerConfig {
            n_hierarchies: 50,
            seed: rng.gen(),
            ..Default::default()
        };
        let a = run_timer(&ga, &pl, &mapping, &cfg).map_err(|e| e.to_string())?;
        ensure!(
            a.last.coco_plus <= a.initial.coco_plus,
            "instance {i}: Coco+ rose from {} to {}",
            a.initial.coco_plus,
            a.last.coco_plus
        );
        ensure!(a.labels.label_set() == a.initial_labels.label_set(), "instance {i}: label set changed");
        ensure!(
            a.mapping.size_multiset() == mapping.size_multiset(),
            "instance {i}: block sizes changed"
        );
        let b = run_timer(&ga, &pl, &mapping, &cfg).unwrap();
        ensure!(a.labels == b.labels && a.mapping == b.mapping, "instance {i}: rerun differs");
        if a.last.coco_plus < a.initial.coco_plus {
            improved += 1;
        }
    }
    Ok(format!("50 instances, monotone, conserving, reproducible ({improved} improved)"))
}

fn criterion_6() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for t in 0..1000 {
        let dim = rng.gen_range(3..=8);
        let n = rng.gen_range(1..=64.min(1 << dim));
        let g = random_graph(n, rng.gen_range(0..4 * n + 1), &mut rng);
        let mut pool: Vec<u64> = (0..1u64 << dim).collect();
        pool.shuffle(&mut rng);
        let fine = pool[..n].to_vec();
        let mut set = fine.clone();
        set.sort_unstable();
        let ext = rng.gen_range(0..dim);
        let mut perm: Vec<u8> = (0..dim as u8).collect();
        perm.shuffle(&mut rng);
        let layout = LabelLayout::identity(dim - ext, dim).permuted(&perm);

        for with_swaps in [true, false] {
            let mut h = Hierarchy {
                dim,
                ..Default::default()
            };
            let mut level = HierarchyLevel::finest(&g, fine.clone());
            for i in 2..dim {
                if with_swaps {
                    level.swap_phase(layout.level_masks(i - 1));
                }
                let (next, parent) = level.contract();
                h.level_labels.push(std::mem::take(&mut level.labels));
                h.parents.push(parent);
                level = next;
            }
            h.level_labels.push(level.labels);
            let out = assemble(&h, &set).map_err(|e| format!("hierarchy {t}: {e}"))?;
            if with_swaps {
                let msb = 1u64 << (dim - 1);
                ensure!(
                    (0..n).all(|v| out[v] & msb == fine[v] & msb),
                    "hierarchy {t}: MSB changed"
                );
                let mut sorted = out.clone();
                sorted.sort_unstable();
                ensure!(sorted == set, "hierarchy {t}: not a bijection onto the label set");
            } else {
                ensure!(out == fine, "hierarchy {t}: zero swaps did not reproduce the input");
            }
        }
    }
    Ok("1000 hierarchies bijective, MSB kept, identity without swaps".into())
}

fn criterion_7() -> Verdict {
    let t0 = Instant::now();
    let gp = TopologySpec::grid2d(16, 16).generate().unwrap();
    let pl = label_partial_cube(&gp).unwrap();
    let sizes: Vec<usize> = (0..10).map(|i| 5000 + i * 15000 / 9).collect();
    let results: Vec<(u64, u64)> = std::thread::scope(|s| {
        let handles: Vec<_> = sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let pl = &pl;
                s.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(700 + i as u64);
                    let ga = random_geometric(n, 8.0, &mut rng);
                    let p = grow_partition(&ga, pl.n(), 0.03, &mut rng).unwrap();
                    let mapping = identity_mapping(&p, pl).unwrap();
                    let cfg = TimerConfig {
                        n_hierarchies: 50,
                        seed: i as u64,
                        ..Default::default()
                    };
                    let out = run_timer(&ga, pl, &mapping, &cfg).unwrap();
                    (out.initial.coco, out.last.coco)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut reductions: Vec<f64> = results.iter().map(|&(b, a)| 1.0 - a as f64 / b as f64).collect();
    let reduced = reductions.iter().filter(|&&r| r > 0.0).count();
    reductions.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = (reductions[4] + reductions[5]) / 2.0;
    let dt = t0.elapsed();
    let summary = format!(
        "{reduced}/10 reduced, median reduction {:.1}% (range {:.1}%..{:.1}%), {dt:.1?}",
        100.0 * median,
        100.0 * reductions[0],
        100.0 * reductions[9]
    );
    ensure!(reduced >= 8, "{summary}");
    ensure!(median >= 0.05, "{summary}");
    ensure!(dt < Duration::from_secs(600), "{summary}");
    Ok(summary)
}

fn criterion_8() -> Verdict {
    let gp = TopologySpec::grid2d(16, 16).generate().unwrap();
    let pl = label_partial_cube(&gp).unwrap();
    let per_hierarchy = |n: usize, rep: u64| -> (usize, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(800 + rep);
        let ga = random_geometric(n, 8.0, &mut rng);
        let p = grow_partition(&ga, pl.n(), 0.03, &mut rng).unwrap();
        let mapping = identity_mapping(&p, &pl).unwrap();
        let cfg = TimerConfig {
            n_hierarchies: 10,
            seed: rep,
            ..Default::default()
        };
        let out = run_timer(&ga, &pl, &mapping, &cfg).unwrap();
        let ms = out.trace.iter().map(|t| t.millis).sum::<f64>() / out.trace.len() as f64;
        (ga.m(), ms)
    };
    let (mut m1, mut m2, mut t1, mut t2) = (0, 0, 0.0, 0.0);
    for rep in 0..5 {
        let (m, t) = per_hierarchy(8000, rep);
        m1 += m;
        t1 += t;
        let (m, t) = per_hierarchy(16000, rep);
        m2 += m;
        t2 += t;
    }
    let ratio = t2 / t1;
    let summary = format!(
        "|E| x{:.2}, per-hierarchy time {:.1} ms -> {:.1} ms, factor {ratio:.2}",
        m2 as f64 / m1 as f64,
        t1 / 5.0,
        t2 / 5.0
    );
    ensure!(ratio <= 3.0, "{summary}");
    Ok(summary)
}

fn criterion_9() -> Verdict {
    let run = |instance: &str, before: (f64, u64, u64), after: (f64, u64, u64)| RunRecord {
        instance: instance.into(),
        topology: "grid2d:16x16".into(),
        seed: 0,
        before: Metrics {
            millis: before.0,
            cut: before.1,
            coco: before.2,
        },
        after: Metrics {
            millis: after.0,
            cut: after.1,
            coco: after.2,
        },
        trace: None,
    };
    // Per-instance (min, mean, max) quotients, worked out by hand:
    //   a: T 0.5 0.5 0.5   Cut 0.25 0.25 0.25   Co 0.5 0.5 0.5
    //   b: T 4   4   4     Cut 0.5  0.5  0.5    Co 2   2   2
    //   c: T 2   1   2/3   Cut 1    1    1      Co 1   1   1
    let runs = vec![
        run("a", (10.0, 100, 200), (5.0, 25, 100)),
        run("a", (30.0, 100, 400), (15.0, 25, 200)),
        run("b", (10.0, 40, 100), (40.0, 20, 200)),
        run("c", (1.0, 8, 10), (2.0, 8, 30)),
        run("c", (2.0, 8, 20), (2.0, 8, 20)),
        run("c", (3.0, 8, 30), (2.0, 8, 10)),
    ];
    let rep = aggregate::<f64>(&runs);

    let ln2 = std::f64::consts::LN_2;
    let s23 = 2f64.powf((2.0f64 / 3.0).sqrt());
    let s14 = 2f64.powf(14f64.sqrt() / 3.0);
    // qT_max logs: -ln 2, 2 ln 2, ln 2 - ln 3
    let tmax_logs = [-ln2, 2.0 * ln2, ln2 - 3f64.ln()];
    let tmax_mu = (2.0 * ln2 - 3f64.ln()) / 3.0;
    let tmax_var = tmax_logs.iter().map(|l| (l - tmax_mu).powi(2)).sum::<f64>() / 3.0;
    let expected = [
        (4f64.cbrt(), s14),
        (2f64.cbrt(), s14),
        ((4.0f64 / 3.0).cbrt(), tmax_var.sqrt().exp()),
        (0.5, s23),
        (0.5, s23),
        (0.5, s23),
        (1.0, s23),
        (1.0, s23),
        (1.0, s23),
    ];
    let mut worst = 0.0f64;
    for (i, (g, (gm, gsd))) in rep.summary.flatten().iter().zip(expected).enumerate() {
        let g = g.unwrap();
        ensure!(g.count == 3, "quotient {i}: {} instances", g.count);
        for (got, want) in [(g.gmean.unwrap(), gm), (g.gsd.unwrap(), gsd)] {
            let rel = ((got - want) / want).abs();
            worst = worst.max(rel);
            ensure!(rel <= 1e-12, "quotient {i}: {got} vs {want} (rel {rel:e})");
        }
    }
    ensure!(rep.excluded.is_empty(), "unexpected exclusions");
    Ok(format!("9 geometric means and deviations, worst relative error {worst:.1e}"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("partial-cube dimensions", criterion_1),
        ("rejection suite", criterion_2),
        ("Coco oracle equivalence", criterion_3),
        ("swap-gain oracle", criterion_4),
        ("optimizer invariants", criterion_5),
        ("assemble bijectivity", criterion_6),
        ("quality smoke", criterion_7),
        ("complexity smoke", criterion_8),
        ("harness arithmetic", criterion_9),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if only.is_some_and(|k| k != i + 1) {
            continue;
        }
        match f() {
            Ok(msg) => println!("criterion {} ({name}): PASS - {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL - {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
