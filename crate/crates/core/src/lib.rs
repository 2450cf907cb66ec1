//! Mapping application graphs onto partial-cube processor topologies.
//!
//! A processor graph that is a partial cube gets bit labels whose Hamming
//! distances equal hop distances ([`label_partial_cube`]). Every application
//! vertex then receives a unique label: the label of its PE followed by a
//! few extension bits ([`LabelState::extend`]). Communication cost becomes a
//! masked Hamming sum, and [`run_timer`] lowers it by swapping labels
//! between siblings of random label hierarchies.
//!
//! ```
//! use cubemap::{label_partial_cube, run_timer, Graph, Partition, TimerConfig, TopologySpec};
//!
//! let gp = TopologySpec::grid2d(2, 2).generate().unwrap();
//! let pl = label_partial_cube(&gp).unwrap();
//! let ga = Graph::from_unweighted_edges(8, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)]).unwrap();
//! let mapping = Partition::new(vec![0, 3, 1, 2, 0, 3, 1, 2], 4).unwrap();
//! let cfg = TimerConfig { n_hierarchies: 10, seed: 1, ..Default::default() };
//! let out = run_timer(&ga, &pl, &mapping, &cfg).unwrap();
//! assert!(out.last.coco_plus <= out.initial.coco_plus);
//! ```

pub mod distance;
pub mod error;
pub mod graph;
pub mod label;
pub mod mapping;
pub mod objective;
pub mod pcube;
pub mod report;
pub mod synthetic;
pub mod timer;
pub mod topology;

pub use distance::{bfs, bfs_all_pairs, DistanceTable};
pub use error::{Error, ParseError, Result};
pub use graph::{contract_blocks, parse_metis, parse_partition, write_metis, write_partition, Graph, Mapping, Partition};
pub use label::{BitLabel, ExtendOptions, LabelLayout, LabelState, LevelMasks};
pub use mapping::{greedy_allc, greedy_min, grow_partition, identity_mapping, Assignment};
pub use objective::{balance_check, coco, coco_plus, div, edge_cut, swap_gain, ObjectiveValue};
pub use pcube::{label_partial_cube, verify_isometry, LabeledTopology, NotPartialCube, PcubeLabeling, Reason, Witness};
pub use report::{aggregate, Metrics, RunRecord};
pub use timer::{run_timer, HierarchyTrace, TimerConfig, TimerOutcome};
pub use topology::{TopologyKind, TopologySpec};

/// Benchmark summary in double precision.
pub type AggregateReport = report::AggregateReportOf<f64>;
pub type InstanceQuotients = report::InstanceQuotients<f64>;
pub type GeoStat = report::GeoStat<f64>;
