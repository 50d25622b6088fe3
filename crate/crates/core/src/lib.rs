//! Symbolic toolkit for spaces with involution whose mod-2 cohomology halves
//! degrees: graded algebras over the two-element field, H*-frames and their
//! axioms, frame constructors, cell-count calculus, and Morse-Bott assembly
//! for Hamiltonian torus actions.

pub mod algebra;
pub mod cellcomplex;
pub mod constructors;
pub mod frames;
pub mod hamiltonian;
pub mod linalg;
pub mod registry;
pub mod report;
