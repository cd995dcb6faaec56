//! Exact divisor-class arithmetic on moduli spaces of pointed, nodal and
//! hyperelliptic curves, effectivity certificates for canonical classes, and
//! Reid–Tai age computations.
//!
//! Everything here is exact: coefficients are arbitrary-precision rationals and
//! no floating point is used anywhere.
#![no_std]
extern crate alloc;

pub mod basis;
pub mod campaigns;
pub mod catalog;
pub mod certify;
pub mod error;
pub mod maps;
pub mod rational;
pub mod singularity;

pub use basis::{BasisSymbol, DivisorClass, Group, LabelSet, Level, SpaceContext, SpaceKind};
pub use error::{Error, Result};
pub use rational::Q;
