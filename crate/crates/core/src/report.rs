//! Benchmark records and their aggregation into before/after quotients.
//!
//! For every instance the repeats are reduced to min, mean and max of
//! running time (T), edge cut (Cut) and communication cost (Co), after and
//! before optimization. Dividing after by before gives nine quotients per
//! instance; their geometric means and geometric standard deviations across
//! instances summarize a benchmark. A Cut or Co quotient below 1 is an
//! improvement.

use std::fmt::Write as _;

use num_traits::{Float, NumCast};
use serde::{Deserialize, Serialize};

/// Metric values of one mapping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub millis: f64,
    pub cut: u64,
    pub coco: u64,
}

/// One optimizer run. `before.millis` is the time of whatever produced the
/// initial mapping (or an external baseline time); `after.millis` is the
/// optimizer's own time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub topology: String,
    pub seed: u64,
    pub before: Metrics,
    pub after: Metrics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triple<F> {
    pub min: Option<F>,
    pub mean: Option<F>,
    pub max: Option<F>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase")]
pub struct QuotientSet<F> {
    #[serde(rename = "T")]
    pub t: Triple<F>,
    pub cut: Triple<F>,
    pub co: Triple<F>,
}

impl<F: Copy> QuotientSet<F> {
    /// The nine quotients in `qT_min, qT_mean, ..., qCo_max` order.
    pub fn flatten(&self) -> [Option<F>; 9] {
        let mut out = [None; 9];
        for (i, t) in [self.t, self.cut, self.co].iter().enumerate() {
            out[3 * i] = t.min;
            out[3 * i + 1] = t.mean;
            out[3 * i + 2] = t.max;
        }
        out
    }
}

pub const QUOTIENT_NAMES: [&str; 9] = [
    "qT_min", "qT_mean", "qT_max", "qCut_min", "qCut_mean", "qCut_max", "qCo_min", "qCo_mean",
    "qCo_max",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceQuotients<F> {
    pub instance: String,
    pub runs: usize,
    pub quotients: QuotientSet<F>,
}

/// Geometric mean and geometric standard deviation of one quotient over
/// the instances where it is defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoStat<F> {
    pub gmean: Option<F>,
    pub gsd: Option<F>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exclusion {
    pub instance: String,
    pub quotient: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReportOf<F> {
    pub instances: Vec<InstanceQuotients<F>>,
    pub summary: QuotientSet<GeoStat<F>>,
    pub excluded: Vec<Exclusion>,
}

fn cast<F: Float>(x: impl num_traits::ToPrimitive) -> F {
    <F as NumCast>::from(x).expect("finite metric value")
}

pub fn mean<F: Float>(xs: &[F]) -> Option<F> {
    if xs.is_empty() {
        return None;
    }
    Some(xs.iter().fold(F::zero(), |a, &x| a + x) / cast(xs.len()))
}

/// Geometric mean of positive values.
pub fn geometric_mean<F: Float>(xs: &[F]) -> Option<F> {
    if xs.is_empty() || !xs.iter().all(|&x| x > F::zero()) {
        return None;
    }
    let logs: Vec<F> = xs.iter().map(|x| x.ln()).collect();
    mean(&logs).map(F::exp)
}

/// Geometric standard deviation: `exp` of the population standard deviation
/// of the logarithms. A single value gives 1.
pub fn geometric_std<F: Float>(xs: &[F]) -> Option<F> {
    let gm = geometric_mean(xs)?;
    let lg = gm.ln();
    let sq: Vec<F> = xs.iter().map(|x| (x.ln() - lg).powi(2)).collect();
    mean(&sq).map(|v| v.sqrt().exp())
}

fn stats<F: Float>(xs: &[F]) -> [F; 3] {
    let min = xs.iter().copied().fold(F::infinity(), F::min);
    let max = xs.iter().copied().fold(F::neg_infinity(), F::max);
    [min, mean(xs).unwrap(), max]
}

/// Reduces runs to per-instance quotients and their geometric summaries.
/// Runs are grouped by instance name in order of first appearance. A
/// quotient whose denominator is not positive is left out and listed in
/// `excluded`.
pub fn aggregate<F: Float>(runs: &[RunRecord]) -> AggregateReportOf<F> {
    let mut names: Vec<&str> = Vec::new();
    for r in runs {
        if !names.contains(&r.instance.as_str()) {
            names.push(&r.instance);
        }
    }

    let mut instances = Vec::with_capacity(names.len());
    let mut excluded = Vec::new();
    let mut columns: [Vec<F>; 9] = Default::default();
    for name in names {
        let group: Vec<&RunRecord> = runs.iter().filter(|r| r.instance == name).collect();
        let pick = |f: fn(&Metrics) -> F| -> ([F; 3], [F; 3]) {
            let before: Vec<F> = group.iter().map(|r| f(&r.before)).collect();
            let after: Vec<F> = group.iter().map(|r| f(&r.after)).collect();
            (stats(&before), stats(&after))
        };
        let metrics = [
            pick(|m| cast(m.millis)),
            pick(|m| cast(m.cut)),
            pick(|m| cast(m.coco)),
        ];
        let mut q = [None; 9];
        for (mi, (before, after)) in metrics.iter().enumerate() {
            for s in 0..3 {
                let i = 3 * mi + s;
                if before[s] > F::zero() && after[s].is_finite() {
                    let v = after[s] / before[s];
                    q[i] = Some(v);
                    if v > F::zero() {
                        columns[i].push(v);
                    } else {
                        excluded.push(Exclusion {
                            instance: name.to_string(),
                            quotient: QUOTIENT_NAMES[i].to_string(),
                            reason: "zero quotient has no logarithm".into(),
                        });
                    }
                } else {
                    excluded.push(Exclusion {
                        instance: name.to_string(),
                        quotient: QUOTIENT_NAMES[i].to_string(),
                        reason: "baseline value is not positive".into(),
                    });
                }
            }
        }
        let triple = |i: usize| Triple {
            min: q[i],
            mean: q[i + 1],
            max: q[i + 2],
        };
        instances.push(InstanceQuotients {
            instance: name.to_string(),
            runs: group.len(),
            quotients: QuotientSet {
                t: triple(0),
                cut: triple(3),
                co: triple(6),
            },
        });
    }

    let geo = |i: usize| GeoStat {
        gmean: geometric_mean(&columns[i]),
        gsd: geometric_std(&columns[i]),
        count: columns[i].len(),
    };
    let triple = |i: usize| Triple {
        min: Some(geo(i)),
        mean: Some(geo(i + 1)),
        max: Some(geo(i + 2)),
    };
    AggregateReportOf {
        instances,
        summary: QuotientSet {
            t: triple(0),
            cut: triple(3),
            co: triple(6),
        },
        excluded,
    }
}

impl<F: Float + std::fmt::Display> AggregateReportOf<F> {
    /// One row per instance plus a geometric-mean row, columns
    /// `qT_min ... qCo_max`. Undefined entries are left empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("instance");
        for name in QUOTIENT_NAMES {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        let mut row = |label: &str, vals: [Option<F>; 9]| {
            out.push_str(label);
            for v in vals {
                out.push(',');
                if let Some(v) = v {
                    write!(out, "{v}").unwrap();
                }
            }
            out.push('\n');
        };
        for inst in &self.instances {
            row(&inst.instance, inst.quotients.flatten());
        }
        let gm = self.summary.flatten().map(|g| g.and_then(|g| g.gmean));
        row("geometric_mean", gm);
        let gsd = self.summary.flatten().map(|g| g.and_then(|g| g.gsd));
        row("geometric_std", gsd);
        out
    }
}
