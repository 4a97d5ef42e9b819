//! Exact arithmetic on Fibonacci and Lucas numbers and the algebraic
//! structures built from them: identities, quaternion algebras over Q,
//! split certificates for those algebras, generalized recurrences and
//! recurrences over abstract groups.

pub mod cli;
pub mod error;
pub mod genseq;
pub mod identities;
pub mod num;
pub mod quatalg;
pub mod seqcore;
pub mod splitcert;

pub use error::{Error, Result};
pub use num::{Integer, Rational, SeqIndex};
