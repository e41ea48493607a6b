//! Borel transgression of the fibration `G -> G/T` for compact connected
//! simple Lie groups, together with the exact linear algebra, lattice
//! bookkeeping and Leray-Serre E2 page machinery around it.

pub mod exactlin;
pub mod rootdata;
pub mod lattices;
pub mod transgression;
pub mod spectral;
