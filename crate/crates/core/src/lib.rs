//! Binomial complexities of the generalized Thue-Morse words `t_m`.
//!
//! `t_m` is the fixed point of `sigma_m : i -> i (i+1) ... (i+m-1)` (letters
//! mod `m`) starting with `0`. The crate counts subword occurrences, groups
//! factors under k-binomial equivalence, computes sigma-factorizations and
//! abelian Rauzy graphs, and evaluates the closed-form complexity formulas
//! for `t_m`, with brute-force checks tying the two sides together.

pub mod binomial;
pub mod error;
pub mod factorization;
pub mod factors;
pub mod formulas;
pub mod limits;
pub mod rauzy;
pub mod verify;
pub mod word;

pub use binomial::{binom, equivalent_k, signature, BinomialSignature, SubwordCount};
pub use error::{Error, Result};
pub use factors::{
    abelian_complexity, class_partition, factor_complexity, factor_set, kbinomial_complexity,
    shortest_equivalent_pair, ClassPartition, FactorSet,
};
pub use formulas::FormulaDomainError;
pub use limits::Limits;
pub use word::{
    parikh, sigma_image, sigma_power, tau_apply, tm_letter, tm_prefix, Letter, ParikhVector, Word,
};
