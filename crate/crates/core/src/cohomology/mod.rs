//! Coboundaries over finite rotations, Mackey groups, `ψ` correction tables
//! and the exact two-term limit formula.

mod coboundary;
mod mackey;
mod psi;
mod random;

pub use coboundary::{
    check_cocycle_identity, is_coboundary, is_coboundary_on, walk_sum, CoboundaryOutcome, Obstruction,
};
pub use mackey::{joint_space, mackey_component, mackey_group, MackeyGroup, MackeySubgroup};
pub use psi::{
    limit_formula_rhs, limit_formula_rhs_with, psi_table_with, psi_tables, verify_limit_formula, LimitCheck,
    PsiTable, Selection,
};
pub use random::{decomposition_expected, kernel_image, random_cocycle};
