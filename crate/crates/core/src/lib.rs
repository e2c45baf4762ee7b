//! Exact computations for Jacobian elliptic surfaces over `P¹`: Kodaira fiber
//! configurations, loci dimensions, Hurwitz spaces and monodromy, Weierstrass
//! models and their Jacobi rings.

pub mod hurwitz;
pub mod jacobi;
pub mod kodaira;
pub mod linalg;
pub mod modulicalc;
pub mod permgroup;
pub mod poly;
pub mod table;
pub mod weierstrass;
