#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(a < b)` also rejects NaN, on purpose

pub mod error;
pub mod linalg;
pub mod opmodel;
pub mod specflow;
pub mod etazeta;
pub mod seeley;
pub mod apsindex;

pub use error::{Error, Result};
