//! Cognitive hierarchies with top-down context.
//!
//! * [`kernel`] holds the generic node/hierarchy model and the two-phase
//!   process model (sensing sweep up, prediction sweep down).
//! * [`bp`] embeds Pearl causal trees into a hierarchy and checks the
//!   resulting beliefs against a direct message-passing engine.
//! * [`servo`] is a three-node camera controller tracking an object on an
//!   inclined plane, with and without context from a physics node.

pub mod bp;
pub mod kernel;
pub mod servo;
