//! Complete exponential sums modulo `q` attached to a diagonal quaternary
//! form: direct oracles, the closed-form evaluation of `S_q(n)`, and the
//! identities between them.

mod form;
mod gauss;
mod lemmas;
mod oracle;
mod sq;

pub use form::{condition_a0, condition_a0_factored, decompose_factored, decompose_q, DiagonalForm, OffsetVector, QDecomposition};
pub use gauss::{
    gauss_sum_brute, gauss_sum_closed, gauss_sum_with, kloosterman, kloosterman_with, ramanujan_prime_power, ramanujan_sum,
    s_plus_minus, s_plus_minus_brute, Sign,
};
pub use lemmas::{a_q_split, a_q_with_offset_equals_sq, s_dq_split};
pub use oracle::{
    a_q_brute, s_dq_brute, t_q, t_q_brute, t_q_composed, t_q_prime_fast, AqOracle, Tier, TqPath, TqRecord, FACTORED_LIMIT, FULL_LIMIT,
    SDQ_FULL_LIMIT, TQ_BRUTE_LIMIT, TQ_PRIME_LIMIT,
};
pub use sq::{jacobi_product_j, sq_closed, sq_closed_factored, sq_structure, SqEvaluator, SqStructure, STRUCTURE_VERIFY_LIMIT};

/// The five forms the verification grids run over.
pub fn standard_forms() -> Vec<DiagonalForm> {
    [[1, 1, 1, 1], [1, 1, 1, -1], [1, 2, 3, -6], [2, 3, 5, 7], [3, 1, 1, -1]]
        .into_iter()
        .map(|a| DiagonalForm::new(a).expect("nonzero"))
        .collect()
}
