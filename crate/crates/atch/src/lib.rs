//! Embeddable engine for attributed temporal causal hypergraphs.

pub mod canon;
pub mod cli;
pub mod causal;
pub mod conflict;
pub mod fixtures;
pub mod interval;
pub mod model;
pub mod projection;
pub mod query;
pub mod store;
pub mod temporal;
