//! Z₊-rings, Frobenius–Perron dimensions and the rank/dimension bounds and
//! screens built on them.

pub mod arith;
pub mod bounds;
pub mod catdata;
pub mod enumerate;
pub mod fpdim;
pub mod json;
pub mod linalg;
pub mod poly;
pub mod rank2;
pub mod ring;
pub mod screener;

pub use ring::{RingElement, RingError, RingPresentation};
