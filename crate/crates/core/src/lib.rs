pub mod specialfn;
pub mod curvegeom;
pub mod linalg;
pub mod singquad;
pub mod nutrientbim;
pub mod membrane;
pub mod evolver;
pub mod stokesbim;
pub mod lintheory;
pub mod cli;
