//! Abelian congruences for Fourier coefficients of modular forms.
//!
//! The crate decides, for a finite subgroup `G` of `GL_2` over a small finite field,
//! which trace values are governed by congruence conditions on the prime `p`. This is
//! read through the coset structure of the commutator subgroup `[G,G]`. It also
//! generates `a_p` data from eta products and elliptic curves and searches that data
//! for such congruences.
//!
//! Module map:
//!
//! * [`ffield`]: arithmetic in `F_{p^r}` and quadratic-symbol helpers.
//! * [`matgrp`]: 2x2 matrices, group closure, commutators, cosets, projectivization.
//! * [`classify`]: Dickson labels for projective images and Borel recognition.
//! * [`abelian`]: per-class verdicts, densities, theorem cross-checks, modulus bounds.
//! * [`eigendata`]: q-series, `tau(n)`, point counting, datasets.
//! * [`discover`]: empirical congruence discovery and table verification.
//! * [`cli`]: the `abcong` command-line front end.

pub mod abelian;
pub mod classify;
pub mod cli;
pub mod discover;
pub mod eigendata;
pub mod ffield;
pub mod matgrp;

pub use ffield::{Fe, FieldElement, FieldSpec};
pub use matgrp::{Mat2, MatGroup, ProjGroup};
