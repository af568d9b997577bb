//! Exact character theory on concrete pattern groups.

mod classfn;
mod cyclo;
mod mackey;
pub(crate) mod modp;
mod table;

use thiserror::Error;

use crate::ffgroup::GroupError;
use crate::rootsys::RootError;

pub use classfn::{
    base_group, basic_character, check_basic_data, conductor, elementary_character, induce, induce_from,
    lambda_exponent, linear_lambda, psi, tensor_of_elementaries, transversal, ClassFunction,
};
pub use cyclo::{Cyclo, Rational};
pub use mackey::{mackey_inner, MACKEY_COSET_CAP};
pub use table::{
    almost_faithful_subset, decompose_into_irr, degree_histogram, irr_table, irr_table_for, CentralBucket, CharTable,
    ClassesDoc, IrrDoc, TableDoc, STRETCH_CAP, TABLE_CAP,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("class functions have different owners")]
    OwnerMismatch,
    #[error("not a subgroup of the target group")]
    NotSubgroup,
    #[error("invalid basic data: {0}")]
    InvalidBasicData(String),
    #[error("the handle is not the base group of the given basic data")]
    WrongBaseGroup,
    #[error("size cap exceeded")]
    CapExceeded,
    #[error("eigenspace splitting failed: {0}")]
    SplittingFailure(String),
    #[error("table validation failed: {0}")]
    Validation(String),
    #[error("degree {0} is not a power of q")]
    NonPowerDegree(u64),
    #[error("not a character: {0}")]
    NotACharacter(String),
    #[error("inner product is not rational")]
    NotRational,
    #[error("the given subgroup is not the center")]
    WrongCenter,
    #[error("corrupt table document: {0}")]
    CorruptTable(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Root(#[from] RootError),
}

#[cfg(test)]
mod tests;
