//! Hybrid-cloud placement of service-based applications.
//!
//! An application is a weighted graph of services. Each service needs some
//! hosting units and each edge carries a communication rate. A placement puts
//! every service either in the private cloud (free) or in the public cloud,
//! where hosting and communication are billed. The goal is the cheapest
//! placement that offloads at least `hq` hosting units.
//!
//! * [`model`]: graph, placement, pricing, and the cost function.
//! * [`exact`]: exhaustive and branch-and-bound optimal solvers.
//! * [`metaheuristics`]: binary PSO plus GA and greedy baselines.
//! * [`instances`]: synthetic instance generation and graph file I/O.
//! * [`bench`]: the experiment sweep, summaries, CSV/plot output, and CLI.

pub mod bench;
pub mod error;
pub mod exact;
pub mod instances;
pub mod metaheuristics;
pub mod model;

pub use error::{Error, Result};
pub use exact::{exact_solve, exact_solve_bnb, SolveResult};
pub use metaheuristics::{bpso_solve, ga_solve, greedy_solve, BpsoConfig, GaConfig};
pub use model::{
    evaluate_cost, is_feasible, CommEdge, CostBreakdown, CostParams, Placement, SbaGraph,
    ServiceNode,
};
