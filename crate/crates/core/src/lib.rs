//! Exact and fractional coloring of circle graphs through arborescences of
//! the interval containment DAG.

pub mod bnb;
pub mod clique;
pub mod coloring;
pub mod dag;
pub mod formulations;
pub mod graph;
pub mod instances;
pub mod interval;
pub mod lpformat;
pub mod model;
pub mod mwis;
pub mod oracle;
pub mod simplex;
pub mod stowage;

pub use bnb::{
    first_fit, solve_chromatic, solve_chromatic_with, solve_stacks, solve_stacks_with, BnbOptions, SolveError,
    SolveReport, StacksReport,
};
pub use clique::{max_antichain, CliqueMatrix};
pub use coloring::{validate_coloring, Arborescence, Coloring, ColoringError, DecodeError};
pub use dag::{ContainmentDag, Node};
pub use graph::CircleGraph;
pub use interval::{InstanceError, Interval, IntervalRepresentation};
pub use lpformat::{read_lp, read_mps, write_lp, write_mps, FormatError};
pub use model::{Formulation, LpModel, ModelMetadata, Relation, Sense, VarKind, VarRole};
pub use mwis::{chain_partition, decode_arborescence, max_weight_chain, solve_mwis, MwisSolution};
pub use simplex::{solve_lp, solve_lp_with, LpSolution, LpStatus, SimplexError, SimplexOptions};
pub use stowage::{build_cgh, decode_plan, LayeredArc, LayeredDag, StackPlan, StowageError};
