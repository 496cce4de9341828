//! Symbolic arithmetic in the bigraded mod-l cohomology ring of B(Z/l)^n,
//! together with the Bockstein, reduced power, and Milnor primitive
//! operations acting on it.
//!
//! The ring is presented over F_l by a central polynomial part
//! F_l[tau, y_1, ..., y_n] and exterior generators x_1, ..., x_n, with
//! x_i^2 = tau * y_i when l = 2 and x_i^2 = 0 at odd l.  Bidegrees are
//! (first degree, weight): x_i sits in (1, 1), y_i in (2, 1), tau in (0, 1).
//!
//! - [`ring`]: contexts, monomials, elements, products, bases.
//! - [`ops`]: Bockstein, reduced powers with the twisted Cartan rule at
//!   l = 2, and Milnor primitives Q_i (both the commutator recursion and an
//!   independent derivation formula).
//! - [`expr`]: the text grammar for elements and operation words, plus
//!   machine-readable computation records.

pub mod expr;
pub mod ops;
pub mod ring;

pub use expr::{parse_element, parse_word, ComputationRecord, ExprError, TermRecord};
pub use ops::{bockstein, milnor, milnor_derivation, power, OperationWord, PrimitiveOp};
pub use ring::{Bidegree, Element, Generator, Monomial, RingContext, RingError};
