//! Finite groupoids, two-sided modules and centre constructions.
//!
//! Everything is represented by dense integer tables so that every
//! "diagram commutes" statement becomes a decidable equality. The crate is
//! organised bottom-up:
//!
//! * [`fincat`] finite categories, groupoids, functors and set-valued functors;
//! * [`profunctor`] modules, coend composition, the `F_* ⊣ F^*` adjunction and
//!   idempotent splitting;
//! * [`coend`] multi-variable coends used by the coherence checkers;
//! * [`dayconv`] promonoidal categories and Day convolution;
//! * [`autgpd`] the automorphism groupoid, crossed G-sets and half-braidings;
//! * [`fibred`] groupoid fibrations and their fibre pseudofunctors;
//! * [`centre`] centre objects, convolution of pseudofunctors and full centres;
//! * [`cli`] documents, command surface and reports.

pub mod autgpd;
pub mod centre;
pub mod cli;
pub mod coend;
pub mod dayconv;
pub mod error;
pub mod fibred;
pub mod fincat;
pub mod profunctor;
pub mod report;
pub mod seeded;
pub mod suites;
pub mod unionfind;

pub use error::{Error, Result};
