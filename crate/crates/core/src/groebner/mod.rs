//! Tree polynomials over the rationals, division, S-polynomials, bounded
//! Buchberger completion and normal-form counting.

mod buchberger;
mod normal_forms;
mod poly;
mod reduce;

pub use buchberger::{buchberger, interreduce, CompletionStatus, GroebnerReport};
pub use normal_forms::{count_normal_forms, ideal_dimension_oracle, polynomial_rank, Echelon};
pub use poly::{coeff_string, leading_monomial, Coeff, TreePolynomial};
pub use reduce::{reduce, s_polynomial, Reducer};
