#![no_std]
extern crate alloc;

pub mod algebra;
pub mod error;
pub mod huliu;
pub mod invariant;
pub mod leibniz;
pub mod linalg;
pub mod numeric;
pub mod passages;
pub mod report;
pub mod simplicity;
pub mod xi_group;
