//! Inputs shared by the construction benchmarks.

use std::sync::Arc;

use cagekit::{build, Construction, Family, FamilyId, FiniteField};

/// Field orders used for field-table construction.
pub const FIELD_ORDERS: [u32; 4] = [23, 64, 128, 251];

/// Prime orders for the ({r,2r-5};5) construction, smallest to largest.
pub const R2RM5_ORDERS: [u32; 3] = [7, 13, 23];

pub fn field(q: u32) -> Arc<FiniteField> {
    Arc::new(FiniteField::with_order(q).expect("benchmark orders are prime powers"))
}

pub fn r2rm5(q: u32) -> Construction {
    build(FamilyId::new(Family::R2Rm5, q)).expect("benchmark orders are admissible")
}
