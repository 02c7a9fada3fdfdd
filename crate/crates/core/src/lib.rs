pub mod bounds;
pub mod canon;
pub mod constructions;
pub mod containment;
pub mod engine;
pub mod error;
pub mod family;
pub mod matrix;
pub mod reproduce;
pub mod saturation;
pub mod search;

pub use canon::{canonical_form, isomorphic};
pub use containment::{contains, ContainmentWitness};
pub use error::{Error, Result, TextPos};
pub use family::{family_free, parse_family, parse_shorthand, Family, ForbiddenFamily};
pub use matrix::{build_k_l, build_t, chi, format_matrix, parse_matrix, ColumnId, Matrix, RowSubset};
