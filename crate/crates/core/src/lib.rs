pub mod geometry;
pub mod layout;
pub mod pdf;
pub mod raster;
pub mod checkbox;
pub mod grammar;
pub mod export;
pub mod records;
pub mod batch;
pub mod synth;
