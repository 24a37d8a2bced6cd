//! Per-function dataflow machinery: control-flow graphs over the concrete
//! syntax tree, def-use chains from reaching definitions, flat-lattice
//! constant propagation, taint reachability, and return summaries.
//!
//! Everything here is a pure function of an immutable parse tree, so any
//! number of functions and files can be analyzed in parallel.

mod cfg;
mod consts;
mod returns;
mod taint;

pub use cfg::{build_cfg, linear_cfg, synthetic_cfg, CfgFunction, CfgNode, CfgNodeKind, DefUseLink};
pub use consts::{eval_constants, eval_package_level, AbstractValue, ConstMap, FnConstReturns, Slot};
pub use returns::{constant_return, summarize_returns, ReturnSummary};
pub use taint::{taint_reach, TaintPath};
