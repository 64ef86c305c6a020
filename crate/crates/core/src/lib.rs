pub mod criteria;
pub mod exactmath;
pub mod harness;
pub mod linalg;
pub mod quadrature;
pub mod sampling;
