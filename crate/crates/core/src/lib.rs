//! Periods, borders and repetitions of finite words.
//!
//! The crate is organised bottom-up:
//!
//! - [`words`]: border arrays, period sets, exponents and initial critical
//!   exponents of finite words.
//! - [`repetitions`]: overlap and square detection, the palindromic
//!   overlap-free family `A_p`, its squarefree gap encoding `B_p`, and the
//!   exhaustive searches for shortest words with a prescribed number of
//!   nontrivial periods.
//! - [`numeration`]: continued fractions, convergents and the ordinary and
//!   lazy Ostrowski codecs.
//! - [`sturmian`]: characteristic Sturmian prefixes and their period sets
//!   read off the lazy Ostrowski representation.
//! - [`automatic`]: the period-doubling and Thue–Morse words and the
//!   closed forms for their prefix period counts.
//! - [`measures`]: the nontrivial-period inequality, expectations and the
//!   periodicity measure `M(x) = nnp(x) / (ice(x) ln |x|)`.
//! - [`verify`]: named oracle-equivalence suites shared by the CLI and tests.
//! - [`cli`]: the `periodlab` command-line front end.

pub mod automatic;
pub mod cli;
pub mod error;
pub mod measures;
pub mod numeration;
pub mod rational;
pub mod repetitions;
pub mod sturmian;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use rational::ExactRational;
pub use words::Word;
