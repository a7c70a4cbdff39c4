//! Shuffle operads with admissible orders built from ordered monoids.
//!
//! The pieces, bottom up:
//!
//! * [`tree`]: shuffle tree monomials, shuffle composition, divisibility,
//!   overlaps and enumeration by arity.
//! * [`monoid`]: ordered monoids, in particular the quantum monomials
//!   `QM = <x, y, q | xq = qx, yq = qy, yx = xyq>`, and a law checker.
//! * [`word`]: the word operad of a monoid, tree evaluation, path sequences
//!   and leaf permutations.
//! * [`order`]: monomial orders as chains of comparison stages, and the
//!   order that makes the Poisson relations a quadratic Gröbner basis.
//! * [`groebner`]: exact rational tree polynomials, reduction, bounded
//!   Buchberger completion and dimension counts.
//! * [`presentation`]: built-in presentations and the text format.
//!
//! ```
//! use operad_core::{buchberger, builtin, build_poisson_order};
//!
//! let pois = builtin("pois").unwrap();
//! let order = build_poisson_order(&pois.generators).unwrap();
//! let report = buchberger(&pois.shuffle_relations, &order, 4).unwrap();
//! assert!(report.survivors.is_empty());
//! assert_eq!(report.basis.len(), 6);
//! ```

pub mod error;
pub mod groebner;
pub mod monoid;
pub mod order;
pub mod presentation;
pub mod syntax;
pub mod tree;
pub mod word;

pub use error::{Error, Result};
pub use groebner::{
    buchberger, count_normal_forms, ideal_dimension_oracle, interreduce, leading_monomial, reduce,
    s_polynomial, Coeff, CompletionStatus, GroebnerReport, TreePolynomial,
};
pub use monoid::{
    qm_compare, qm_from_word, qm_mul, FreeMonoid, FreeWord, LawReport, Monoid, OrderedMonoid, Qm,
    QmElement, QmOrder,
};
pub use order::{
    build_poisson_order, check_admissible, pathlex_order, resolve_order, MonomialOrder,
    PATHLEX_ORDER, POISSON_ORDER,
};
pub use presentation::{builtin, expand_symmetric, OperadPresentation, SymmetricRelation};
pub use syntax::{parse_polynomial, parse_tree};
pub use tree::{
    compose, divides, enumerate_overlaps, enumerate_trees, find_occurrences, validate_tree,
    Generator, Occurrence, Overlap, Relabeling, ShuffleTree, SignSymmetry,
};
pub use word::{
    check_morphism_laws, check_path_injectivity, evaluate_tree, path_sequence, permutation_of,
    word_compose, GeneratorAssignment, Permutation, WordSequence,
};
