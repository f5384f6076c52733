//! Quantum Teichmüller coordinate changes on punctured surfaces.
//!
//! The crate models ideal and decorated ideal triangulations, the classical
//! shear and Kashaev coordinates, and the Chekhov–Fock and Kashaev quantum
//! tori together with their coordinate-change maps. Identities between
//! noncommutative rational expressions are decided by a layered evaluation
//! oracle.

pub mod classical;
pub mod linalg;
pub mod qtorus;
pub mod quantum_maps;
pub mod rational;
pub mod surface;
