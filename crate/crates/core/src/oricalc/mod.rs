//! Determinant characters: formal products of the window symbols `D_k` with
//! exponents that are integer linear forms in the dimension variables `h_k`.

pub mod character;
pub mod linear_form;
pub mod verify;

pub use character::{
    complex_character, degree_character, dims_assignment, eval_char, geometric_char, geometric_char_at,
    koszul_rewrite, ori_char, ori_char_on, split_branch, zero_branch, DetCharacter, Direction, Symbol,
};
pub use linear_form::{LinearForm, Var};
pub use verify::{
    verify_cocycle, verify_cocycle_with, verify_square_root, verify_theorem3, verify_theorem3_with,
    verify_theorem4, ProofReport, Status,
};
