//! Node-level network classification toolkit.
//!
//! Classifies individual nodes by the network class they came from, using
//! seven structural node features and a random-forest classifier, and applies
//! the node-level classifier to whole-network classification from node
//! samples and to bootstrapped network growth.

pub mod bootstrap;
pub mod community;
pub mod error;
pub mod experiments;
pub mod features;
pub mod forest;
pub mod graph;
pub mod models;
pub mod seeds;

pub use error::{Error, Result};
pub use graph::Graph;
