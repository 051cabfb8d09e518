pub mod covers;
pub mod lattice;
pub mod report;
pub mod symmetry;
pub mod tilings;
pub mod torusmap;
pub mod unionfind;
