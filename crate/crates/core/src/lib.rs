//! Exact-arithmetic workbench for modules over finite groups.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactlin`] — integer/rational matrices, Smith and Hermite normal
//!   forms, lattices in `Q^n`, finitely generated abelian groups presented
//!   as `Z^n / col-span(R)`.
//! * [`gmod`] — finite groups given by multiplication tables, modules with
//!   a group action, Tate cohomology in degrees -1..2, induced-module
//!   witnesses and equivariant lifting.
//! * [`sites`] — finite place sets with decomposition subgroups, the cover
//!   condition, and towers.
//! * [`cmpmod`] — the iso/mid/rig module families at a finite level, the
//!   comparison maps between them, splittings, duals, inflation and
//!   localization.
//! * [`tn`] — the Tate–Nakayama layer: coinvariant classes, mid/rig pairs,
//!   Cartesian squares, localization and semi-adelic membership.
//!
//! Everything is computed over arbitrary-precision integers; no floating
//! point is used anywhere.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod cmpmod;
pub mod exactlin;
pub mod gmod;
pub mod sites;
pub mod tn;
