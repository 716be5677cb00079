//! Exact arithmetic in `Z[q, q^-1]` and its field of fractions.
//!
//! [`LaurentPoly`] is the universal carrier for everything the crate
//! computes exactly: q-integers, q-factorials, Pochhammer symbols and the
//! generating functions themselves. [`RationalQ`] carries intermediate
//! values that are rational in `q` even though the final answers are
//! polynomials (individual summands of the hypergeometric sums, determinant
//! entries, ...). Both types are immutable values; all operations are pure.

mod poly;
mod rational;

pub use poly::LaurentPoly;
pub use rational::RationalQ;
