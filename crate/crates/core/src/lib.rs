//! Semi-supervised node classification by heat diffusion.
//!
//! Seeds of each label are held hot while the other seeds are held cold;
//! the equilibrium temperatures of the free nodes are centered and every
//! free node takes the label of its hottest centered diffusion.
//!
//! ```
//! use dirichlet_classifier::{build_graph, classify, CenteringMode, Label, LabeledNodes, SolverConfig};
//!
//! let g = build_graph([(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
//! let seeds = LabeledNodes::from_pairs(
//!     5,
//!     [(0, Label::new(1).unwrap()), (4, Label::new(2).unwrap())],
//!     2,
//! )
//! .unwrap();
//! let pred = classify(&g, &seeds, CenteringMode::AllNodes, &SolverConfig::default()).unwrap();
//! assert_eq!(pred.get(1).unwrap().get(), 1);
//! assert_eq!(pred.get(3).unwrap().get(), 2);
//! ```

pub mod bench;
pub mod blockmodel;
pub mod classifier;
pub mod cli;
pub mod dirichlet;
pub mod error;
pub mod graph;
pub mod io;
pub mod labels;

pub use blockmodel::{
    build_block_graph, closed_form, consistency_check, uncentered_failure_check, BlockModelParams,
    ClosedFormSolution, Consistency, UncenteredOutcome,
};
pub use classifier::{
    classify, classify_binary, classify_modes, CenteringMode, Prediction, ScoreMatrix,
};
pub use dirichlet::{
    mean_temperature, solve_dirichlet, BoundaryCondition, MeanOver, Method, SolverConfig,
    TemperatureField,
};
pub use error::{Error, Result};
pub use graph::{build_graph, connected_components_with_seeds, Components, Edge, Graph};
pub use labels::{Label, LabeledNodes};
