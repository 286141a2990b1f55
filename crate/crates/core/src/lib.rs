pub mod poly;
pub mod geometry;
pub mod quiver;
pub mod decider;
pub mod dynamics;
pub mod parse;
pub mod document;
