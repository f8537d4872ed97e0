//! Numerical experiments on real-rank-one blocks.

pub mod cfunction;
pub mod iwasawa;
pub mod quadrature;

pub use cfunction::{
    asymptotic_td2, blocks_for_pair, c_block, c_joint, c_partial, convergence_region, h_function_checks,
    AsymptoticBlock, AsymptoticReport, AsymptoticRow, BlockExponent, CFunctionValue, HCheckReport, DEFAULT_T_SCHEDULE,
};
pub use iwasawa::{iwasawa_h, RankOneBlock};
pub use quadrature::{improper, ImproperResult, QuadConfig, QuadResult};
