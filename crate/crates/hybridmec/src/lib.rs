//! Joint communication and computation resource management for hybrid
//! cloud / mobile-edge networks.
//!
//! The library synthesizes cellular networks in which a central cloud drives
//! multi-antenna base stations over capacity-limited fronthaul links while
//! UAV-mounted edge clouds serve cell-edge users with their own power and
//! computation budgets. It then maximizes the weighted sum rate over
//! beamforming vectors, rate allocations, and per-user compute cycles via
//! reweighted-l1 sparsification, successive convex approximation, and the
//! fractional-programming quadratic transform, solving each convex
//! subproblem with a log-barrier interior-point method. Three execution
//! protocols are provided: fully centralized (FCP), partially decentralized
//! with per-round interference exchange (PDP), and fully distributed (FDP).
//!
//! Start with [`scenario::generate_scenario`] to build an instance, then run
//! a protocol from [`protocols`]:
//!
//! ```
//! use hybridmec::prelude::*;
//!
//! let tp = TopologyParams {
//!     num_bs: 1,
//!     bs_positions: Some(vec![[0.0, 0.0]]),
//!     num_users: 2,
//!     num_uav: 0,
//!     num_edge_users: 0,
//!     ..Default::default()
//! };
//! let sc = generate_scenario(
//!     &tp,
//!     &ChannelParams::default(),
//!     &TaskParams::default(),
//!     &BudgetParams::default(),
//!     7,
//! )
//! .unwrap();
//! let opts = ProtocolOptions { max_outer_iterations: 4, ..Default::default() };
//! let run = run_fcp(&sc, &opts).unwrap();
//! assert!(run.feasibility.pass);
//! ```
//!
//! The `book/` directory of the repository walks through the model and the
//! algorithms chapter by chapter; its code snippets compile and run as part
//! of `cargo test --doc`.

pub mod experiment;
pub mod model;
pub mod protocols;
pub mod reformulate;
pub mod scenario;
pub mod solver;

/// Common imports for examples and downstream code.
pub mod prelude {
    pub use crate::experiment::{load_config, run_sweep, ExperimentConfig, SweepAxis};
    pub use crate::model::{audit, metrics, MetricsReport, VariableState};
    pub use crate::protocols::{run_fcp, run_fdp, run_pdp, Protocol, ProtocolOptions, RunResult};
    pub use crate::reformulate::{assemble_subproblem, Scope, SurrogateAnchors};
    pub use crate::scenario::{
        generate_scenario, BudgetParams, ChannelParams, Entity, NetworkScenario, TaskParams,
        TopologyParams,
    };
    pub use crate::solver::{solve, ConvexSubproblem, SolveOptions, SolveStatus};
}

// The book chapters double as doc-tests so the guide can never drift from
// the API.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            pub struct $name;
        };
    }
    chapter!(Introduction, "../../../book/src/introduction.md");
    chapter!(NetworkModel, "../../../book/src/network-model.md");
    chapter!(Reformulations, "../../../book/src/reformulations.md");
    chapter!(BarrierSolver, "../../../book/src/barrier-solver.md");
    chapter!(Protocols, "../../../book/src/protocols.md");
    chapter!(Experiments, "../../../book/src/experiments.md");
}
