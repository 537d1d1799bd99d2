pub mod container;
pub mod elemset;
pub mod engine;
pub mod model;
pub mod pattern;
pub mod theory;
