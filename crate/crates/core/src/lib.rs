#![no_std]
//! Algebraic core of the telesum creative telescoping engine.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod certificate;
pub mod cyclic;
pub mod error;
pub mod expr;
pub mod frac;
pub mod gcd;
pub mod linalg;
pub mod modp;
pub mod mono;
pub mod ore;
pub mod poly;
pub mod reduction;
pub mod series;
pub mod shift;
pub mod shiftless;
pub mod telescoper;
