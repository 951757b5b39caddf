//! Partially conflict-avoiding codes (PCAC) and partially user-irrepressible
//! (UI) protocol sequence sets.
//!
//! The crate is organised bottom-up:
//!
//! * [`seqcore`] binary periodic sequences, characteristic sets and the
//!   shift-bounded Hamming cross-correlation.
//! * [`field`] GF(p^m) arithmetic with discrete-log tables.
//! * [`diffsets`] disjoint difference sets, difference triangle sets,
//!   Skolem, Singer and Bose designs.
//! * [`packing`] supporting graphs and (k, Δ)-packings of K_n.
//! * [`codes`] PCAC and UI verification plus the closed-form bounds on
//!   M_Δ(n, k).
//! * [`constructions`] TDMA, polynomial (GF) and DDS-based sequence sets and
//!   the period comparison calculator.
//! * [`search`] exact branch-and-bound packing search and difference family
//!   backtracking.
//! * [`formats`] the plain-text and JSON file formats.

pub mod codes;
pub mod constructions;
pub mod diffsets;
pub mod error;
pub mod field;
pub mod formats;
pub mod numtheory;
pub mod packing;
pub mod search;
pub mod seqcore;

pub use error::{Error, Result};
