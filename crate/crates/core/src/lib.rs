#![no_std]
// `!(x > 0.0)` is meant to reject NaN; index loops mirror the poset tables.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]
extern crate alloc;

pub mod cone;
pub mod domains;
pub mod error;
pub mod linalg;
pub mod parabolics;
pub mod rank_one;
pub mod root_datum;
pub mod rootset;
pub mod weyl;

pub use error::{Error, Result};
pub use linalg::{QMatrix, QVec, Rat};
pub use root_datum::{RawDatum, SymmetricRootDatum};
pub use rootset::RootSet;
pub mod verify;
