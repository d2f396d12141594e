//! Exact integral lattices, isometries, rational polyhedral cones and
//! non-abelian first cohomology, assembled into checks for real and Klein
//! automorphisms of hyperkähler-type Hodge lattices.

#![allow(clippy::needless_range_loop)]

pub mod abelian;
pub mod catalog;
pub mod cohomology;
pub mod cone;
pub mod domain;
pub mod filtration;
pub mod group;
pub mod hilbert;
pub mod hodge;
pub mod isometry;
pub mod lattice;
pub mod matrix;
pub mod num;
pub mod real_forms;
pub mod reduction;
pub mod smith;
pub mod subgroups;
